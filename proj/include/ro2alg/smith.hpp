#pragma once

#include <optional>
#include <vector>

#include "ro2alg/twolocal.hpp"

namespace ro2 {

/// Dense integer matrix, row major. Empty matrices keep explicit dimensions.
struct Mat {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<Int> a;  // rows*cols entries

    Mat() = default;
    Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c, Int(0)) {}

    Int& at(size_t i, size_t j) { return a[i * cols + j]; }
    const Int& at(size_t i, size_t j) const { return a[i * cols + j]; }

    static Mat identity(size_t n);
    Mat operator*(const Mat& o) const;
    std::vector<Int> apply(const std::vector<Int>& x) const;  // this * x
    bool operator==(const Mat& o) const = default;
};

/// U * A * V = D with D in Smith normal form (d1 | d2 | ..., nonnegative).
struct SNF {
    Mat D;
    Mat U, Uinv;
    Mat V, Vinv;
    size_t rank = 0;
};

SNF smith_normal_form(Mat A);

/// Basis of the integer kernel of A, as columns of an n x k matrix.
Mat kernel_basis(const Mat& A);

/// Integer solution of A x = b if one exists.
std::optional<std::vector<Int>> solve_integer(const Mat& A, const std::vector<Int>& b);

/// Basis (columns) of the lattice spanned by the columns of P.
Mat column_lattice_basis(const Mat& P);

/// Invariant factors of Z^n / (column span of M), one entry per generator of
/// the quotient: d >= 2 for cyclic factors, 0 for free ones (factors of 1 are
/// dropped).
std::vector<Int> quotient_invariants(size_t n, const Mat& M);

/// Homology of  W --A--> X --B--> Z  at X, where each group is presented with
/// diagonal relation orders (0 = free generator). Generators of the result are
/// expressed as integer vectors over X's generators.
struct HomologyResult {
    std::vector<std::vector<Int>> gens;
    std::vector<Int> orders;  // matching gens; 0 = free, else >= 2
};

HomologyResult presented_homology(const Mat& A, const std::vector<Int>& orders_x,
                                  const Mat& B, const std::vector<Int>& orders_z,
                                  bool two_local);

/// 2-primary part of d (d = 0 stays 0).
Int two_primary_part(Int d);

}  // namespace ro2
