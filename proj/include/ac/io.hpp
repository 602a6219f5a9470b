#pragma once

#include "ac/gallery.hpp"
#include "ac/pipeline.hpp"
#include "ac/subspace.hpp"
#include "ac/suites.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ac {

/// Unreadable, unwritable or malformed file.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense complex matrix with optional property tags.
struct MatrixFile {
    int version = 1;
    CMat M;
    bool hermitian = false;
    bool unitary = false;
};

constexpr double kTagTolerance = 1e-8;

/// Parses the JSON matrix format; verifies tags at kTagTolerance. Throws IoError.
MatrixFile parse_matrix(const std::string& text);
std::string format_matrix(const MatrixFile& f);
MatrixFile read_matrix(const std::string& path);
void write_matrix(const std::string& path, const MatrixFile& f);

/// Raw sidecar: dim as little-endian u64, then 2·dim² little-endian doubles (re, im) row-major.
void write_cbin(const std::string& path, const CMat& M);
CMat read_cbin(const std::string& path);

std::string read_text(const std::string& path);
/// Writes to a temporary sibling then renames over the target.
void atomic_write(const std::string& path, const std::string& content);

/// FNV-1a over the dimension and the raw entry bytes.
std::uint64_t fnv1a(const CMat& M);
std::string hash_hex(std::uint64_t h);

nlohmann::json to_json(const BoundCheck& c);
nlohmann::json to_json(const WCertificate& c);
nlohmann::json to_json(const HastingsDiagnostics& d);
nlohmann::json to_json(const CommuteReport& r);
nlohmann::json to_json(const SuiteResult& r);
nlohmann::json to_json(const WindingResult& w);
nlohmann::json to_json(const SweepReport& s);

/// Columns delta, distA, distB, eps2_max, scale, Delta, n_cut, comm_residual; trailing monotone flags as comments.
std::string sweep_csv(const SweepReport& s);
/// Columns index, computed, printed, tolerance, pass.
std::string quarter_csv(const QuarterComparison& q);

}  // namespace ac
