#include "ro2alg/smith.hpp"

#include <cassert>
#include <cstdlib>

namespace ro2 {

Mat Mat::identity(size_t n) {
    Mat m(n, n);
    for (size_t i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

Mat Mat::operator*(const Mat& o) const {
    assert(cols == o.rows);
    Mat r(rows, o.cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t k = 0; k < cols; ++k) {
            const Int& v = at(i, k);
            if (v == 0)
                continue;
            for (size_t j = 0; j < o.cols; ++j)
                r.at(i, j) += v * o.at(k, j);
        }
    return r;
}

std::vector<Int> Mat::apply(const std::vector<Int>& x) const {
    assert(x.size() == cols);
    std::vector<Int> y(rows, Int(0));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j)
            if (at(i, j) != 0)
                y[i] += at(i, j) * x[j];
    return y;
}

namespace {

Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }

struct Worker {
    Mat D, U, Uinv, V, Vinv;

    // row ops keep U*A0*V = D: D <- E*D means U <- E*U, Uinv <- Uinv*E^{-1}
    void row_swap(size_t i, size_t j) {
        for (size_t c = 0; c < D.cols; ++c) std::swap(D.at(i, c), D.at(j, c));
        for (size_t c = 0; c < U.cols; ++c) std::swap(U.at(i, c), U.at(j, c));
        for (size_t r = 0; r < Uinv.rows; ++r) std::swap(Uinv.at(r, i), Uinv.at(r, j));
    }
    void row_negate(size_t i) {
        for (size_t c = 0; c < D.cols; ++c) D.at(i, c) = -D.at(i, c);
        for (size_t c = 0; c < U.cols; ++c) U.at(i, c) = -U.at(i, c);
        for (size_t r = 0; r < Uinv.rows; ++r) Uinv.at(r, i) = -Uinv.at(r, i);
    }
    // row_i += q*row_j ; inverse: column_j -= q*column_i in Uinv
    void row_add(size_t i, size_t j, const Int& q) {
        for (size_t c = 0; c < D.cols; ++c) D.at(i, c) += q * D.at(j, c);
        for (size_t c = 0; c < U.cols; ++c) U.at(i, c) += q * U.at(j, c);
        for (size_t r = 0; r < Uinv.rows; ++r) Uinv.at(r, j) -= q * Uinv.at(r, i);
    }
    void col_swap(size_t i, size_t j) {
        for (size_t r = 0; r < D.rows; ++r) std::swap(D.at(r, i), D.at(r, j));
        for (size_t r = 0; r < V.rows; ++r) std::swap(V.at(r, i), V.at(r, j));
        for (size_t c = 0; c < Vinv.cols; ++c) std::swap(Vinv.at(i, c), Vinv.at(j, c));
    }
    void col_negate(size_t i) {
        for (size_t r = 0; r < D.rows; ++r) D.at(r, i) = -D.at(r, i);
        for (size_t r = 0; r < V.rows; ++r) V.at(r, i) = -V.at(r, i);
        for (size_t c = 0; c < Vinv.cols; ++c) Vinv.at(i, c) = -Vinv.at(i, c);
    }
    // col_i += q*col_j ; inverse: row_j -= q*row_i in Vinv
    void col_add(size_t i, size_t j, const Int& q) {
        for (size_t r = 0; r < D.rows; ++r) D.at(r, i) += q * D.at(r, j);
        for (size_t r = 0; r < V.rows; ++r) V.at(r, i) += q * V.at(r, j);
        for (size_t c = 0; c < Vinv.cols; ++c) Vinv.at(j, c) -= q * Vinv.at(i, c);
    }
};

}  // namespace

SNF smith_normal_form(Mat A) {
    const size_t m = A.rows, n = A.cols;
    Worker w{std::move(A), Mat::identity(m), Mat::identity(m), Mat::identity(n),
             Mat::identity(n)};
    Mat& D = w.D;

    size_t t = 0;
    const size_t tmax = std::min(m, n);
    while (t < tmax) {
        // pick pivot of least absolute value in the trailing block
        size_t pi = t, pj = t;
        bool found = false;
        Int best = 0;
        for (size_t i = t; i < m; ++i)
            for (size_t j = t; j < n; ++j)
                if (D.at(i, j) != 0) {
                    Int v = iabs(D.at(i, j));
                    if (!found || v < best) {
                        best = v;
                        pi = i;
                        pj = j;
                        found = true;
                    }
                }
        if (!found)
            break;
        if (pi != t) w.row_swap(t, pi);
        if (pj != t) w.col_swap(t, pj);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (size_t i = t + 1; i < m; ++i)
                if (D.at(i, t) != 0) {
                    Int q = D.at(i, t) / D.at(t, t);
                    w.row_add(i, t, -q);
                    if (D.at(i, t) != 0) {
                        w.row_swap(i, t);
                        clean = false;
                    }
                }
            for (size_t j = t + 1; j < n; ++j)
                if (D.at(t, j) != 0) {
                    Int q = D.at(t, j) / D.at(t, t);
                    w.col_add(j, t, -q);
                    if (D.at(t, j) != 0) {
                        w.col_swap(j, t);
                        clean = false;
                    }
                }
        }
        // enforce divisibility of the remaining block by the pivot
        bool redo = false;
        for (size_t i = t + 1; i < m && !redo; ++i)
            for (size_t j = t + 1; j < n && !redo; ++j)
                if (D.at(i, j) % D.at(t, t) != 0) {
                    w.row_add(t, i, Int(1));
                    redo = true;
                }
        if (redo)
            continue;
        if (D.at(t, t) < 0)
            w.row_negate(t);
        ++t;
    }

    SNF res;
    res.rank = t;
    res.D = std::move(w.D);
    res.U = std::move(w.U);
    res.Uinv = std::move(w.Uinv);
    res.V = std::move(w.V);
    res.Vinv = std::move(w.Vinv);
    return res;
}

Mat kernel_basis(const Mat& A) {
    if (A.cols == 0)
        return Mat(A.cols, 0);
    if (A.rows == 0) {
        // everything is in the kernel
        return Mat::identity(A.cols);
    }
    SNF s = smith_normal_form(A);
    size_t k = A.cols - s.rank;
    Mat K(A.cols, k);
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < A.cols; ++i)
            K.at(i, j) = s.V.at(i, s.rank + j);
    return K;
}

std::optional<std::vector<Int>> solve_integer(const Mat& A, const std::vector<Int>& b) {
    if (A.cols == 0) {
        for (const Int& v : b)
            if (v != 0)
                return std::nullopt;
        return std::vector<Int>{};
    }
    SNF s = smith_normal_form(A);
    std::vector<Int> c = s.U.apply(b);
    std::vector<Int> y(A.cols, Int(0));
    for (size_t i = 0; i < c.size(); ++i) {
        if (i < s.rank) {
            if (c[i] % s.D.at(i, i) != 0)
                return std::nullopt;
            y[i] = c[i] / s.D.at(i, i);
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    return s.V.apply(y);
}

Mat column_lattice_basis(const Mat& P) {
    if (P.cols == 0)
        return Mat(P.rows, 0);
    SNF s = smith_normal_form(P);
    Mat B(P.rows, s.rank);
    // span(P) = Uinv * span(D): basis vectors Uinv * (d_i e_i)
    for (size_t j = 0; j < s.rank; ++j)
        for (size_t i = 0; i < P.rows; ++i)
            B.at(i, j) = s.Uinv.at(i, j) * s.D.at(j, j);
    return B;
}

std::vector<Int> quotient_invariants(size_t n, const Mat& M) {
    assert(M.rows == n || M.cols == 0);
    std::vector<Int> out;
    if (M.cols == 0) {
        out.assign(n, Int(0));
        return out;
    }
    SNF s = smith_normal_form(M);
    for (size_t i = 0; i < s.rank; ++i)
        if (s.D.at(i, i) != 1)
            out.push_back(s.D.at(i, i));
    for (size_t i = s.rank; i < n; ++i)
        out.push_back(0);
    return out;
}

Int two_primary_part(Int d) {
    if (d == 0)
        return d;
    if (d < 0)
        d = -d;
    Int p = 1;
    while (d % 2 == 0) {
        p *= 2;
        d /= 2;
    }
    return p;
}

HomologyResult presented_homology(const Mat& A, const std::vector<Int>& orders_x,
                                  const Mat& B, const std::vector<Int>& orders_z,
                                  bool two_local) {
    const size_t nx = orders_x.size();
    assert(A.cols == 0 || A.rows == nx);
    assert(B.cols == 0 || B.cols == nx);

    // cycles: K = { x : Bx lies in the relation lattice of Z }
    Mat K;
    if (B.cols == 0 || B.rows == 0) {
        K = Mat::identity(nx);
    } else {
        size_t extra = 0;
        for (const Int& o : orders_z)
            if (o != 0)
                ++extra;
        Mat M(B.rows, B.cols + extra);
        for (size_t i = 0; i < B.rows; ++i)
            for (size_t j = 0; j < B.cols; ++j)
                M.at(i, j) = B.at(i, j);
        size_t c = B.cols;
        for (size_t i = 0; i < orders_z.size(); ++i)
            if (orders_z[i] != 0)
                M.at(i, c++) = orders_z[i];
        Mat full = kernel_basis(M);
        Mat proj(nx, full.cols);
        for (size_t i = 0; i < nx; ++i)
            for (size_t j = 0; j < full.cols; ++j)
                proj.at(i, j) = full.at(i, j);
        K = column_lattice_basis(proj);
    }

    // relations inside the cycles: image of A plus the orders of X
    std::vector<std::vector<Int>> rel_cols;
    for (size_t j = 0; j < A.cols; ++j) {
        std::vector<Int> col(nx);
        for (size_t i = 0; i < nx; ++i)
            col[i] = A.at(i, j);
        rel_cols.push_back(std::move(col));
    }
    for (size_t i = 0; i < nx; ++i)
        if (orders_x[i] != 0) {
            std::vector<Int> col(nx, Int(0));
            col[i] = orders_x[i];
            rel_cols.push_back(std::move(col));
        }

    const size_t s = K.cols;
    Mat Z(s, rel_cols.size());
    for (size_t j = 0; j < rel_cols.size(); ++j) {
        auto sol = solve_integer(K, rel_cols[j]);
        assert(sol && "relation does not lie among the cycles (d∘d != 0?)");
        for (size_t i = 0; i < s; ++i)
            Z.at(i, j) = (*sol)[i];
    }

    HomologyResult res;
    if (s == 0)
        return res;
    SNF zs = smith_normal_form(Z);
    for (size_t i = 0; i < s; ++i) {
        Int order = i < zs.rank ? zs.D.at(i, i) : Int(0);
        if (two_local)
            order = two_primary_part(order);
        if (order == 1)
            continue;
        // generator i of the quotient in X coordinates: K * (Uinv column i)
        std::vector<Int> w(s);
        for (size_t r = 0; r < s; ++r)
            w[r] = zs.Uinv.at(r, i);
        std::vector<Int> g = K.apply(w);
        res.gens.push_back(std::move(g));
        res.orders.push_back(order);
    }
    return res;
}

}  // namespace ro2
