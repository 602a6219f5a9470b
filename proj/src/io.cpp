#include "ac/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ac {

using nlohmann::json;

namespace {

double entry(const json& v, const char* what) {
    if (!v.is_number()) throw IoError(std::string("matrix file: ") + what + " is not a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw IoError(std::string("matrix file: ") + what + " is not finite");
    return x;
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int k = 7; k >= 0; --k) v = (v << 8) | p[k];
    return v;
}

json checks_json(const std::vector<BoundCheck>& cs) {
    json a = json::array();
    for (const auto& c : cs) a.push_back(to_json(c));
    return a;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

MatrixFile parse_matrix(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("matrix file: ") + e.what());
    }
    if (!j.is_object()) throw IoError("matrix file: top level is not an object");
    if (!j.contains("dim") || !j["dim"].is_number_integer()) throw IoError("matrix file: missing integer 'dim'");
    if (!j.contains("entries") || !j["entries"].is_array()) throw IoError("matrix file: missing 'entries' array");
    MatrixFile f;
    f.version = j.value("version", 1);
    if (f.version != 1) throw IoError("matrix file: unsupported version " + std::to_string(f.version));
    const long long n = j["dim"].get<long long>();
    if (n < 1) throw IoError("matrix file: dim must be positive");
    const json& rows = j["entries"];
    if (static_cast<long long>(rows.size()) != n) throw IoError("matrix file: row count differs from dim");
    f.M = CMat(n, n);
    for (long long r = 0; r < n; ++r) {
        if (!rows[r].is_array() || static_cast<long long>(rows[r].size()) != n)
            throw IoError("matrix file: row " + std::to_string(r) + " has wrong length");
        for (long long c = 0; c < n; ++c) {
            const json& z = rows[r][c];
            if (!z.is_array() || z.size() != 2)
                throw IoError("matrix file: entry (" + std::to_string(r) + "," + std::to_string(c) + ") is not [re, im]");
            f.M(r, c) = cplx(entry(z[0], "real part"), entry(z[1], "imaginary part"));
        }
    }
    f.hermitian = j.value("hermitian", false);
    f.unitary = j.value("unitary", false);
    const double scale = std::max(1.0, op_norm(f.M));
    if (f.hermitian && op_norm(f.M - f.M.adjoint()) > kTagTolerance * scale)
        throw IoError("matrix file: tagged hermitian but ‖M − M*‖ exceeds tolerance");
    if (f.unitary && op_norm(f.M.adjoint() * f.M - CMat::Identity(n, n)) > kTagTolerance)
        throw IoError("matrix file: tagged unitary but ‖M*M − I‖ exceeds tolerance");
    return f;
}

std::string format_matrix(const MatrixFile& f) {
    const int n = static_cast<int>(f.M.rows());
    json rows = json::array();
    for (int r = 0; r < n; ++r) {
        json row = json::array();
        for (int c = 0; c < n; ++c) row.push_back({f.M(r, c).real(), f.M(r, c).imag()});
        rows.push_back(std::move(row));
    }
    json j = {{"version", f.version}, {"dim", n}, {"entries", rows}};
    if (f.hermitian) j["hermitian"] = true;
    if (f.unitary) j["unitary"] = true;
    return j.dump() + "\n";
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed for '" + path + "'");
    return ss.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto '" + path + "'");
    }
}

MatrixFile read_matrix(const std::string& path) {
    try {
        return parse_matrix(read_text(path));
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

void write_matrix(const std::string& path, const MatrixFile& f) { atomic_write(path, format_matrix(f)); }

void write_cbin(const std::string& path, const CMat& M) {
    if (M.rows() != M.cols()) throw PreconditionError("write_cbin: matrix not square");
    const std::uint64_t n = static_cast<std::uint64_t>(M.rows());
    std::string out;
    out.reserve(8 + 16 * n * n);
    put_u64(out, n);
    for (std::uint64_t r = 0; r < n; ++r)
        for (std::uint64_t c = 0; c < n; ++c) {
            put_u64(out, std::bit_cast<std::uint64_t>(M(r, c).real()));
            put_u64(out, std::bit_cast<std::uint64_t>(M(r, c).imag()));
        }
    atomic_write(path, out);
}

CMat read_cbin(const std::string& path) {
    const std::string s = read_text(path);
    const auto* p = reinterpret_cast<const unsigned char*>(s.data());
    if (s.size() < 8) throw IoError(path + ": truncated header");
    const std::uint64_t n = get_u64(p);
    if (n == 0 || n > (1u << 20) || s.size() != 8 + 16 * n * n) throw IoError(path + ": size does not match dim");
    CMat M(n, n);
    std::size_t off = 8;
    for (std::uint64_t r = 0; r < n; ++r)
        for (std::uint64_t c = 0; c < n; ++c) {
            const double re = std::bit_cast<double>(get_u64(p + off));
            const double im = std::bit_cast<double>(get_u64(p + off + 8));
            off += 16;
            M(r, c) = cplx(re, im);
        }
    return M;
}

std::uint64_t fnv1a(const CMat& M) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) {
        for (int k = 0; k < 8; ++k) {
            h ^= (v >> (8 * k)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(M.rows()));
    mix(static_cast<std::uint64_t>(M.cols()));
    for (Eigen::Index r = 0; r < M.rows(); ++r)
        for (Eigen::Index c = 0; c < M.cols(); ++c) {
            mix(std::bit_cast<std::uint64_t>(M(r, c).real()));
            mix(std::bit_cast<std::uint64_t>(M(r, c).imag()));
        }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

json to_json(const BoundCheck& c) {
    return {{"context", c.context},
            {"lhs", finite_or_null(c.lhs)},
            {"rhs", finite_or_null(c.rhs)},
            {"slack", finite_or_null(c.slack)},
            {"pass", c.pass()}};
}

json to_json(const WCertificate& c) {
    return {{"engine", c.engine},
            {"dim_W", c.W_nested.cols()},
            {"trivial", c.trivial},
            {"contains_V1", c.contains_V1},
            {"perp_VL", c.perp_VL},
            {"eps2", c.eps2},
            {"eps3", c.eps3},
            {"eps4", c.eps4},
            {"eps5", c.eps5},
            {"eps3_dual", c.eps3_dual},
            {"eps4_dual", c.eps4_dual},
            {"eps5_dual", c.eps5_dual},
            {"dual_gap", c.dual_gap},
            {"nest_eps", c.nest_eps},
            {"nest_distance", to_json(c.nest_distance)},
            {"eps2_bound", to_json(c.eps2_bound)},
            {"eps2_stated_rhs", c.eps2_stated_rhs},
            {"notes", c.notes}};
}

json to_json(const HastingsDiagnostics& d) {
    json stages = json::array();
    for (const auto& s : d.stages) {
        json values = json::object();
        for (const auto& [k, v] : s.values) values[k] = finite_or_null(v);
        stages.push_back({{"id", s.id}, {"passed", s.passed}, {"detail", s.detail}, {"values", values}});
    }
    std::vector<int> mpos(d.M_positive.begin(), d.M_positive.end());
    return {{"n_win", d.n_win},
            {"l_b", d.l_b},
            {"n_b", d.n_b},
            {"kappa", d.kappa},
            {"lambda_min", d.lambda_min},
            {"G_lb", d.G_lb},
            {"gate_evaluated", d.gate_evaluated},
            {"gate_passed", d.gate_passed},
            {"downgraded", d.downgraded},
            {"all_passed", d.all_passed()},
            {"stages", stages},
            {"N_commutators", d.N_commutators},
            {"item4", d.item4},
            {"M_positive", mpos},
            {"C1", finite_or_null(d.C1)},
            {"alpha", finite_or_null(d.alpha)},
            {"C2", finite_or_null(d.C2)},
            {"C3", finite_or_null(d.C3)},
            {"min_Au", d.min_Au},
            {"eps3_reference", finite_or_null(d.eps3_reference)},
            {"eps4_reference", finite_or_null(d.eps4_reference)},
            {"eps5_reference", finite_or_null(d.eps5_reference)},
            {"YUY", d.YUY}};
}

json to_json(const CommuteReport& r) {
    json intervals = json::array();
    for (const auto& iv : r.intervals)
        intervals.push_back({{"index", iv.index},
                             {"dim", iv.dim},
                             {"blocks", iv.blocks},
                             {"scale", iv.scale},
                             {"eps2", iv.eps2},
                             {"eps3", iv.eps3},
                             {"eps4", iv.eps4},
                             {"eps5", iv.eps5},
                             {"trivial", iv.trivial},
                             {"engine", iv.engine}});
    json refs = json::object();
    for (const auto& [k, v] : r.references) refs[k] = finite_or_null(v);
    json j = {{"delta", r.delta},
              {"Delta", r.Delta},
              {"n_cut", r.n_cut},
              {"exponents",
               {{"gamma0", r.exponents.gamma0},
                {"gamma1", r.exponents.gamma1},
                {"gamma", r.exponents.gamma},
                {"finite_range", r.exponents.finite_range}}},
              {"distA", r.distA},
              {"distB", r.distB},
              {"comm_residual", r.comm_residual},
              {"eps2_max", r.max_eps2()},
              {"finite_range_dist", r.finite_range_dist},
              {"intervals", intervals},
              {"checks", checks_json(r.checks)},
              {"checks_pass", r.checks_pass()},
              {"references", refs},
              {"notes", r.notes}};
    if (r.has_C) j["distC"] = r.distC;
    return j;
}

json to_json(const SuiteResult& r) {
    json lines = json::array();
    for (const auto& l : r.lines)
        lines.push_back({{"name", l.name},
                         {"trials", l.trials},
                         {"violations", l.violations},
                         {"worst_slack", finite_or_null(l.worst_slack)},
                         {"worst_value", l.worst_value},
                         {"detail", l.detail}});
    return {{"suite", r.id},
            {"seed", r.seed},
            {"trials", r.trials},
            {"violations", r.violations()},
            {"pass", r.pass()},
            {"seconds", r.seconds},
            {"lines", lines}};
}

json to_json(const WindingResult& w) {
    return {{"winding", w.winding},
            {"min_abs", w.min_abs},
            {"steps", w.steps},
            {"stable", w.stable},
            {"winding_start", w.winding_start},
            {"winding_end", w.winding_end}};
}

json to_json(const SweepReport& s) {
    json rows = json::array();
    for (const auto& r : s.rows)
        rows.push_back({{"scale", r.scale},
                        {"delta", r.delta},
                        {"Delta", r.Delta},
                        {"n_cut", r.n_cut},
                        {"distA", r.distA},
                        {"distB", r.distB},
                        {"eps2_max", r.eps2_max},
                        {"comm_residual", r.comm_residual}});
    return {{"rows", rows},
            {"distA_nonincreasing", s.distA_nonincreasing},
            {"distB_nonincreasing", s.distB_nonincreasing},
            {"distA_trend", s.distA_trend},
            {"distB_trend", s.distB_trend}};
}

std::string sweep_csv(const SweepReport& s) {
    std::ostringstream os;
    os.precision(17);
    os << "delta,distA,distB,eps2_max,scale,Delta,n_cut,comm_residual\n";
    for (const auto& r : s.rows)
        os << r.delta << ',' << r.distA << ',' << r.distB << ',' << r.eps2_max << ',' << r.scale << ',' << r.Delta
           << ',' << r.n_cut << ',' << r.comm_residual << '\n';
    os << "# distA_nonincreasing=" << (s.distA_nonincreasing ? "true" : "false")
       << " distB_nonincreasing=" << (s.distB_nonincreasing ? "true" : "false")
       << " distA_trend=" << (s.distA_trend ? "true" : "false") << " distB_trend=" << (s.distB_trend ? "true" : "false")
       << '\n';
    return os.str();
}

std::string quarter_csv(const QuarterComparison& q) {
    std::ostringstream os;
    os.precision(10);
    os << "index,computed,printed,tolerance,pass\n";
    for (const auto& r : q.rows) {
        os << r.index << ',' << r.scaled << ',';
        if (q.has_reference && r.tol > 0) os << r.printed << ',' << r.tol;
        else os << ',';
        os << ',' << (r.pass ? "pass" : "fail") << '\n';
    }
    os << "# scale=" << q.scale;
    if (!q.tail_ratios.empty()) {
        os << " tail_ratios=";
        for (std::size_t k = 0; k < q.tail_ratios.size(); ++k) os << (k ? ";" : "") << q.tail_ratios[k];
    }
    os << " overall=" << (q.pass ? "pass" : "fail") << '\n';
    return os.str();
}

}  // namespace ac
