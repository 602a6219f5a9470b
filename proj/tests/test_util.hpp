#pragma once

#include "ac/matcore.hpp"

#include <doctest.h>

namespace ac::test {

inline CMat diag(std::initializer_list<double> v) {
    CMat D = CMat::Zero(static_cast<int>(v.size()), static_cast<int>(v.size()));
    int i = 0;
    for (double x : v) {
        D(i, i) = x;
        ++i;
    }
    return D;
}

inline CMat sigma_x() {
    CMat S = CMat::Zero(2, 2);
    S(0, 1) = S(1, 0) = 1.0;
    return S;
}

inline CMat sigma_z() { return diag({1.0, -1.0}); }

inline CMat sigma_y() {
    CMat S = CMat::Zero(2, 2);
    S(0, 1) = cplx(0, -1);
    S(1, 0) = cplx(0, 1);
    return S;
}

inline CMat unit_hermitian(int n, Rng& rng) {
    CMat H = random_hermitian(n, rng);
    return H / op_norm(H);
}

}  // namespace ac::test
