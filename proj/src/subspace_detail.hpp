#pragma once

#include "ac/subspace.hpp"

#include <optional>
#include <string>
#include <utility>

namespace ac::detail {

WCertificate trivial_certificate(const TridiagonalSystem& sys, const CMat& W, const std::string& engine,
                                 const std::string& note);

/// An exact reducing subspace when some block is empty or some coupling vanishes.
std::optional<std::pair<CMat, std::string>> exact_split(const TridiagonalSystem& sys);

}  // namespace ac::detail
