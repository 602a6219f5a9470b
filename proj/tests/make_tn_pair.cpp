#include "ac/gallery.hpp"
#include "ac/io.hpp"

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    if (argc == 4 && std::string(argv[1]) == "--family") {
        const int n = 32;
        ac::CMat D = ac::CMat::Zero(n, n);
        for (int i = 0; i < n; ++i) D(i, i) = -1 + 2.0 * i / (n - 1);
        ac::write_matrix(argv[2], ac::MatrixFile{1, D, true, false});
        ac::write_matrix(argv[3], ac::MatrixFile{1, ac::CMat(0.9 * D * D * D), true, false});
        return 0;
    }
    if (argc != 3) {
        std::cerr << "usage: make_tn_pair A.json B.json | make_tn_pair --family A.json B.json\n";
        return 64;
    }
    ac::Rng rng(3);
    auto unit = [&](int n) {
        ac::CMat H = ac::random_hermitian(n, rng);
        return ac::CMat(H / ac::op_norm(H));
    };
    const ac::CMat a = unit(2), b = unit(2);
    ac::write_matrix(argv[1], ac::MatrixFile{1, ac::tn_lift(a, 6), true, false});
    ac::write_matrix(argv[2], ac::MatrixFile{1, ac::tn_lift(b, 6), true, false});
    return 0;
}
