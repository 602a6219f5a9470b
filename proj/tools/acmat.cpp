#include "ac/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kIo = 1;
constexpr int kEngine = 2;
constexpr int kUsage = 64;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

unsigned long long default_seed() {
    if (const char* s = std::getenv("AC_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            std::cerr << "acmat: ignoring malformed AC_SEED='" << s << "'\n";
        }
    }
    return 7;
}

json input_echo(const std::string& path, const ac::CMat& M) {
    return {{"path", path}, {"dim", M.rows()}, {"fnv1a", ac::hash_hex(ac::fnv1a(M))}};
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") std::cout << text;
    else ac::atomic_write(out, text);
}

ac::CMat load_contraction(const std::string& path, bool rescale, std::vector<std::string>& notes) {
    const ac::MatrixFile f = ac::read_matrix(path);
    ac::CMat M = f.M;
    if (!ac::is_hermitian(M, ac::kTagTolerance)) throw InputError(path + ": matrix is not Hermitian");
    M = ac::hermitian_part(M);
    const double nrm = ac::op_norm(M);
    if (nrm > 1 + 1e-12) {
        if (!rescale) throw InputError(path + ": norm " + std::to_string(nrm) + " exceeds 1 (use --rescale)");
        M /= nrm;
        notes.push_back(path + " rescaled by 1/" + std::to_string(nrm));
    }
    return M;
}

struct CommuteArgs {
    std::string a, b, out;
    double gamma2 = 1.0;
    std::string engine = "auto";
    std::string oracle = "heuristic";
    std::vector<std::string> oracle_pair;
    bool rescale = false;
};

int cmd_commute(const CommuteArgs& args) {
    std::vector<std::string> notes;
    const ac::CMat A = load_contraction(args.a, args.rescale, notes);
    const ac::CMat B = load_contraction(args.b, args.rescale, notes);
    if (A.rows() != B.rows()) throw InputError("input dimensions differ");
    ac::PipelineConfig cfg;
    cfg.gamma2 = args.gamma2;
    static const std::map<std::string, ac::Engine> engines = {
        {"auto", ac::Engine::Auto}, {"szarek", ac::Engine::Szarek}, {"hastings", ac::Engine::Hastings}};
    static const std::map<std::string, ac::OracleMode> oracles = {{"heuristic", ac::OracleMode::Heuristic},
                                                                  {"brute", ac::OracleMode::Brute},
                                                                  {"given", ac::OracleMode::Given}};
    cfg.engine.engine = engines.at(args.engine);
    cfg.engine.oracle.mode = oracles.at(args.oracle);
    if (cfg.engine.oracle.mode == ac::OracleMode::Given) {
        cfg.engine.oracle.A_given = ac::read_matrix(args.oracle_pair.at(0)).M;
        cfg.engine.oracle.B_given = ac::read_matrix(args.oracle_pair.at(1)).M;
    }
    ac::CommuteReport rep;
    try {
        rep = ac::commute_hermitian_pair(A, B, cfg);
    } catch (const std::exception& e) {
        std::cerr << "acmat commute: engine failure: " << e.what() << '\n';
        return kEngine;
    }
    for (const auto& n : notes) rep.notes.push_back(n);
    json doc = {{"command", "commute"},
                {"inputs", {input_echo(args.a, A), input_echo(args.b, B)}},
                {"config",
                 {{"gamma2", args.gamma2},
                  {"engine", args.engine},
                  {"oracle", args.oracle},
                  {"rescale", args.rescale}}},
                {"report", ac::to_json(rep)}};
    emit(args.out, doc.dump(2) + "\n");
    std::cerr << "commute: delta=" << rep.delta << " n_cut=" << rep.n_cut << " distA=" << rep.distA
              << " distB=" << rep.distB << " comm_residual=" << rep.comm_residual
              << " checks=" << (rep.checks_pass() ? "pass" : "fail") << '\n';
    return kOk;
}

int cmd_verify(const std::string& id, unsigned long long seed, int trials, const std::string& out) {
    const ac::SuiteResult r = ac::run_suite(id, seed, trials);
    json doc = ac::to_json(r);
    doc["command"] = "verify";
    const std::string text = doc.dump(2) + "\n";
    if (!out.empty()) ac::atomic_write(out, text);
    std::cout << text;
    return r.pass() ? kOk : kEngine;
}

int cmd_gallery(const std::string& object, int n, const std::string& out, bool cbin) {
    if (object == "voiculescu") {
        const auto [U, V] = ac::voiculescu(n);
        const std::string stem = out.empty() ? "voiculescu" : out;
        ac::MatrixFile fu{1, U, false, true}, fv{1, V, false, true};
        ac::write_matrix(stem + "_U.json", fu);
        ac::write_matrix(stem + "_V.json", fv);
        if (cbin) {
            ac::write_cbin(stem + "_U.cbin", U);
            ac::write_cbin(stem + "_V.cbin", V);
        }
        std::cout << stem << "_U.json " << stem << "_V.json\n";
        return kOk;
    }
    if (object == "quarter-tridiag") {
        const ac::QuarterComparison q = ac::quarter_comparison(ac::quarter_tridiag(n));
        emit(out, ac::quarter_csv(q));
        if (!out.empty()) std::cout << (q.pass ? "pass" : "fail") << '\n';
        return kOk;
    }
    const auto [U, V] = ac::voiculescu(n);
    const ac::CMat I = ac::CMat::Identity(n, n);
    json doc = ac::to_json(ac::winding_number(U, V, I, I));
    doc["n"] = n;
    emit(out, doc.dump(2) + "\n");
    return kOk;
}

int cmd_sweep(const std::string& a, const std::string& b, const std::vector<double>& deltas,
              unsigned long long seed, const std::string& out, bool rescale) {
    std::vector<std::string> notes;
    const ac::CMat A = load_contraction(a, rescale, notes);
    const ac::CMat B = load_contraction(b, rescale, notes);
    if (A.rows() != B.rows()) throw InputError("input dimensions differ");
    if (ac::op_norm(ac::commutator(A, B)) > 1e-8) throw InputError("base pair does not commute");
    ac::Rng rng(seed);
    const int n = static_cast<int>(A.rows());
    ac::CMat X = ac::random_hermitian(n, rng), Y = ac::random_hermitian(n, rng);
    X /= ac::op_norm(X);
    Y /= ac::op_norm(Y);
    ac::SweepReport s;
    try {
        s = ac::sweep(A, B, X, Y, deltas);
    } catch (const std::exception& e) {
        std::cerr << "acmat sweep: engine failure: " << e.what() << '\n';
        return kEngine;
    }
    emit(out, ac::sweep_csv(s));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acmat: nearby commuting matrices"};
    app.require_subcommand(1);

    CommuteArgs ca;
    auto* commute = app.add_subcommand("commute", "Nearby commuting pair for two Hermitian contractions");
    commute->add_option("a", ca.a, "First matrix file")->required();
    commute->add_option("b", ca.b, "Second matrix file")->required();
    commute->add_option("--gamma2", ca.gamma2, "Subspace exponent")->check(CLI::Range(1e-6, 1.0));
    commute->add_option("--engine", ca.engine, "Subspace engine")->check(CLI::IsMember({"szarek", "hastings", "auto"}));
    commute->add_option("--oracle", ca.oracle, "Projection oracle")
        ->check(CLI::IsMember({"heuristic", "brute", "given"}));
    commute->add_option("--oracle-pair", ca.oracle_pair, "Matrix files A', B' for the given oracle")->expected(2);
    commute->add_flag("--rescale", ca.rescale, "Divide inputs of norm above 1 by their norm");
    commute->add_option("--out", ca.out, "Report JSON path (stdout if omitted)");

    std::string suite;
    unsigned long long seed = default_seed();
    int trials = 500;
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "Run a property suite");
    verify->add_option("suite", suite, "Suite id")->required()->check(CLI::IsMember(ac::suite_ids()));
    verify->add_option("--seed", seed, "RNG seed (default AC_SEED or 7)");
    verify->add_option("--trials", trials, "Trials per property")->check(CLI::PositiveNumber);
    verify->add_option("--out", verify_out, "Also write the JSON summary here");

    std::string object;
    int gn = 8;
    std::string gallery_out;
    bool cbin = false;
    auto* gallery = app.add_subcommand("gallery", "Generate gallery objects");
    gallery->add_option("object", object, "Object")->required()->check(
        CLI::IsMember({"voiculescu", "quarter-tridiag", "winding"}));
    gallery->add_option("--n", gn, "Size")->check(CLI::Range(2, 1024));
    gallery->add_option("--out", gallery_out, "Output path or stem");
    gallery->add_flag("--cbin", cbin, "Also write binary sidecars for matrices");

    std::string sa, sb, sweep_out;
    std::vector<double> deltas;
    unsigned long long sweep_seed = default_seed();
    bool sweep_rescale = false;
    auto* sweep = app.add_subcommand("sweep", "Distances along a shrinking perturbation of a commuting pair");
    sweep->add_option("a", sa, "First matrix file")->required();
    sweep->add_option("b", sb, "Second matrix file")->required();
    sweep->add_option("--deltas", deltas, "Perturbation scales")->required()->expected(1, -1)->check(
        CLI::PositiveNumber);
    sweep->add_option("--seed", sweep_seed, "Seed of the perturbation direction");
    sweep->add_flag("--rescale", sweep_rescale, "Divide inputs of norm above 1 by their norm");
    sweep->add_option("--out", sweep_out, "CSV path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" || e.get_name() == "CallForVersion")
            return app.exit(e);
        app.exit(e);
        return kUsage;
    }
    if (ca.oracle == "given" && ca.oracle_pair.size() != 2) {
        std::cerr << "acmat commute: --oracle given requires --oracle-pair A B\n";
        return kUsage;
    }

    try {
        if (*commute) return cmd_commute(ca);
        if (*verify) return cmd_verify(suite, seed, trials, verify_out);
        if (*gallery) return cmd_gallery(object, gn, gallery_out, cbin);
        if (*sweep) return cmd_sweep(sa, sb, deltas, sweep_seed, sweep_out, sweep_rescale);
    } catch (const ac::IoError& e) {
        std::cerr << "acmat: " << e.what() << '\n';
        return kIo;
    } catch (const InputError& e) {
        std::cerr << "acmat: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "acmat: " << e.what() << '\n';
        return kEngine;
    }
    return kUsage;
}
