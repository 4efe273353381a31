#include "ro2alg/descent/base.hpp"

#include <algorithm>

#include "ro2alg/errors.hpp"

namespace ro2::descent {

Int Ring::size() const {
    Int s = 1;
    for (const Int& d : orders)
        s *= d;
    return s;
}

Elem Ring::reduce(Elem x) const {
    for (size_t i = 0; i < x.size(); ++i) {
        x[i] %= orders[i];
        if (x[i] < 0)
            x[i] += orders[i];
    }
    return x;
}

Elem Ring::add(const Elem& x, const Elem& y) const {
    Elem z(ngens());
    for (size_t i = 0; i < z.size(); ++i)
        z[i] = x[i] + y[i];
    return reduce(std::move(z));
}

Elem Ring::sub(const Elem& x, const Elem& y) const {
    Elem z(ngens());
    for (size_t i = 0; i < z.size(); ++i)
        z[i] = x[i] - y[i];
    return reduce(std::move(z));
}

Elem Ring::neg(const Elem& x) const {
    Elem z(ngens());
    for (size_t i = 0; i < z.size(); ++i)
        z[i] = -x[i];
    return reduce(std::move(z));
}

Elem Ring::mul(const Elem& x, const Elem& y) const {
    Elem z(ngens(), Int(0));
    for (size_t i = 0; i < ngens(); ++i) {
        if (x[i] == 0)
            continue;
        for (size_t j = 0; j < ngens(); ++j) {
            if (y[j] == 0)
                continue;
            const Elem& e = mul_table[i][j];
            Int c = x[i] * y[j];
            for (size_t t = 0; t < ngens(); ++t)
                z[t] += c * e[t];
        }
    }
    return reduce(std::move(z));
}

bool Ring::is_zero(const Elem& x) const {
    for (const Int& v : x)
        if (v != 0)
            return false;
    return true;
}

Elem Ring::unit(size_t i) const {
    Elem e = zero();
    e[i] = 1;
    return reduce(std::move(e));
}

std::vector<Elem> Ring::elements(long long cap) const {
    if (size() > cap)
        throw InputError("Ring: " + name + " too large to enumerate");
    std::vector<Elem> out;
    Elem cur = zero();
    while (true) {
        out.push_back(cur);
        size_t i = 0;
        while (i < ngens()) {
            cur[i] += 1;
            if (cur[i] < orders[i])
                break;
            cur[i] = 0;
            ++i;
        }
        if (i == ngens())
            break;
    }
    return out;
}

void Ring::check() const {
    const size_t t = ngens();
    if (mul_table.size() != t || one.size() != t)
        throw InputError("Ring: " + name + ": malformed tables");
    for (const Int& d : orders)
        if (d < 1)
            throw InputError("Ring: " + name + ": bad order");
    for (size_t i = 0; i < t; ++i)
        for (size_t j = 0; j < t; ++j) {
            // multiplication respects the generator orders
            Elem scaled = mul_table[i][j];
            for (Int& v : scaled)
                v *= orders[i];
            if (!is_zero(reduce(std::move(scaled))))
                throw InputError("Ring: " + name + ": product not well defined");
            if (reduce(mul_table[i][j]) != reduce(mul_table[j][i]))
                throw InputError("Ring: " + name + ": not commutative");
        }
    for (size_t i = 0; i < t; ++i) {
        if (mul(one, unit(i)) != unit(i))
            throw InputError("Ring: " + name + ": unit fails");
        for (size_t j = 0; j < t; ++j)
            for (size_t k = 0; k < t; ++k)
                if (mul(mul(unit(i), unit(j)), unit(k)) !=
                    mul(unit(i), mul(unit(j), unit(k))))
                    throw InputError("Ring: " + name + ": not associative");
    }
}

RingPtr Ring::zmod(long long n) {
    if (n < 1)
        throw InputError("Ring: modulus must be positive");
    auto r = std::make_shared<Ring>();
    r->orders = {Int(n)};
    r->one = {Int(1)};
    r->mul_table = {{Elem{Int(1)}}};
    r->name = "Z/" + std::to_string(n);
    r->check();
    return r;
}

RingPtr Ring::polyquot(long long p, const std::vector<long long>& f, const std::string& var) {
    if (f.size() < 2 || f.back() != 1)
        throw InputError("Ring: polynomial must be monic of degree >= 1");
    const size_t d = f.size() - 1;
    auto r = std::make_shared<Ring>();
    r->orders.assign(d, Int(p));
    r->one = Elem(d, Int(0));
    r->one[0] = 1;
    // x^d = -(f_0 + f_1 x + ... + f_{d-1} x^{d-1})
    std::vector<Elem> xpow(2 * d, Elem(d, Int(0)));
    for (size_t i = 0; i < d; ++i)
        xpow[i][i] = 1;
    for (size_t e = d; e < 2 * d; ++e) {
        // x^e = x * x^{e-1}: shift then reduce the overflow coordinate
        Elem prev = xpow[e - 1];
        Elem shifted(d, Int(0));
        Int top = prev[d - 1];
        for (size_t i = d - 1; i > 0; --i)
            shifted[i] = prev[i - 1];
        shifted[0] = 0;
        for (size_t i = 0; i < d; ++i)
            shifted[i] -= top * f[i];
        for (Int& v : shifted) {
            v %= p;
            if (v < 0)
                v += p;
        }
        xpow[e] = shifted;
    }
    r->mul_table.assign(d, std::vector<Elem>(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            r->mul_table[i][j] = xpow[i + j];
    r->name = "F" + std::to_string(p) + "[" + var + "]/(f)";
    r->check();
    return r;
}

RingPtr Ring::product(const std::vector<RingPtr>& factors) {
    auto r = std::make_shared<Ring>();
    size_t total = 0;
    for (const auto& f : factors)
        total += f->ngens();
    r->orders.reserve(total);
    r->one.assign(total, Int(0));
    size_t off = 0;
    std::vector<size_t> offs;
    for (const auto& f : factors) {
        offs.push_back(off);
        for (const Int& d : f->orders)
            r->orders.push_back(d);
        for (size_t i = 0; i < f->ngens(); ++i)
            r->one[off + i] = f->one[i];
        off += f->ngens();
    }
    r->mul_table.assign(total, std::vector<Elem>(total, Elem(total, Int(0))));
    for (size_t fi = 0; fi < factors.size(); ++fi) {
        const Ring& f = *factors[fi];
        for (size_t i = 0; i < f.ngens(); ++i)
            for (size_t j = 0; j < f.ngens(); ++j)
                for (size_t t = 0; t < f.ngens(); ++t)
                    r->mul_table[offs[fi] + i][offs[fi] + j][offs[fi] + t] =
                        f.mul_table[i][j][t];
    }
    r->name = "prod";
    for (const auto& f : factors)
        r->name += "(" + f->name + ")";
    r->check();
    return r;
}

RingPtr Ring::quotient(const RingPtr& base, const std::vector<Elem>& ideal_gens) {
    const size_t t = base->ngens();
    // the ideal lattice is spanned by g * e_i for the given generators g
    std::vector<Elem> cols;
    for (const Elem& g : ideal_gens)
        for (size_t i = 0; i < t; ++i)
            cols.push_back(base->mul(g, base->unit(i)));
    for (size_t i = 0; i < t; ++i) {
        Elem c(t, Int(0));
        c[i] = base->orders[i];
        cols.push_back(c);
    }
    Mat rel(t, cols.size());
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < t; ++i)
            rel.at(i, j) = cols[j][i];
    SNF s = smith_normal_form(rel);

    // new generators: rows of U with invariant factor != 1
    std::vector<size_t> keep;
    std::vector<Int> ords;
    for (size_t i = 0; i < t; ++i) {
        Int d = i < s.rank ? s.D.at(i, i) : Int(0);
        if (d == 1)
            continue;
        if (d == 0)
            throw InputError("Ring: quotient of a finite ring must be finite");
        keep.push_back(i);
        ords.push_back(d);
    }
    auto proj = [&](const Elem& x) {
        Elem w(keep.size(), Int(0));
        for (size_t r = 0; r < keep.size(); ++r) {
            for (size_t c = 0; c < t; ++c)
                w[r] += s.U.at(keep[r], c) * x[c];
            w[r] %= ords[r];
            if (w[r] < 0)
                w[r] += ords[r];
        }
        return w;
    };
    auto lift = [&](size_t r) {
        Elem x(t, Int(0));
        for (size_t c = 0; c < t; ++c)
            x[c] = s.Uinv.at(c, keep[r]);
        return base->reduce(std::move(x));
    };

    auto q = std::make_shared<Ring>();
    q->orders = ords;
    q->one = proj(base->one);
    q->mul_table.assign(keep.size(), std::vector<Elem>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i)
        for (size_t j = 0; j < keep.size(); ++j)
            q->mul_table[i][j] = proj(base->mul(lift(i), lift(j)));
    q->name = base->name + "/I";
    q->check();
    return q;
}

// ---------------------------------------------------------------------------

Elem RingMap::apply(const Elem& x) const {
    Elem y = dst->zero();
    for (size_t i = 0; i < src->ngens(); ++i) {
        if (x[i] == 0)
            continue;
        for (size_t t = 0; t < dst->ngens(); ++t)
            y[t] += x[i] * images[i][t];
    }
    return dst->reduce(std::move(y));
}

void RingMap::check() const {
    if (images.size() != src->ngens())
        throw InputError("RingMap: wrong number of generator images");
    for (size_t i = 0; i < src->ngens(); ++i) {
        Elem scaled = images[i];
        for (Int& v : scaled)
            v *= src->orders[i];
        if (!dst->is_zero(dst->reduce(std::move(scaled))))
            throw InputError("RingMap: not well defined on generator orders");
    }
    if (apply(src->one) != dst->one)
        throw InputError("RingMap: does not preserve 1");
    for (size_t i = 0; i < src->ngens(); ++i)
        for (size_t j = 0; j < src->ngens(); ++j)
            if (apply(src->mul(src->unit(i), src->unit(j))) !=
                dst->mul(images[i], images[j]))
                throw InputError("RingMap: not multiplicative");
}

bool RingMap::is_bijective() const {
    if (src->size() != dst->size())
        return false;
    Mat m(dst->ngens(), src->ngens());
    for (size_t j = 0; j < src->ngens(); ++j)
        for (size_t i = 0; i < dst->ngens(); ++i)
            m.at(i, j) = images[j][i];
    return kernel_size(m, src->orders, dst->orders) == 1;
}

RingMap RingMap::identity(const RingPtr& r) {
    RingMap m;
    m.src = r;
    m.dst = r;
    for (size_t i = 0; i < r->ngens(); ++i)
        m.images.push_back(r->unit(i));
    return m;
}

RingMap RingMap::after(const RingMap& first) const {
    RingMap m;
    m.src = first.src;
    m.dst = dst;
    for (const Elem& img : first.images)
        m.images.push_back(apply(img));
    return m;
}

bool RingMap::same_map(const RingMap& o) const {
    if (src != o.src || dst != o.dst)
        return false;
    for (size_t i = 0; i < images.size(); ++i)
        if (dst->reduce(images[i]) != dst->reduce(o.images[i]))
            return false;
    return true;
}

void GroupAction::check() const {
    group.check();
    if (static_cast<int>(maps.size()) != group.order)
        throw InputError("GroupAction: one map per group element required");
    for (const RingMap& m : maps) {
        if (m.src != ring || m.dst != ring)
            throw InputError("GroupAction: maps must be endomorphisms of B");
        m.check();
        if (!m.is_bijective())
            throw InputError("GroupAction: maps must be automorphisms");
    }
    if (!maps[group.id].same_map(RingMap::identity(ring)))
        throw InputError("GroupAction: identity must act trivially");
    for (int a = 0; a < group.order; ++a)
        for (int b = 0; b < group.order; ++b)
            if (!maps[group.op(a, b)].same_map(maps[a].after(maps[b])))
                throw InputError("GroupAction: not a homomorphism");
}

// ---------------------------------------------------------------------------

Mat orders_lattice(const std::vector<Int>& orders) {
    size_t cnt = 0;
    for (const Int& d : orders)
        if (d != 0)
            ++cnt;
    Mat m(orders.size(), cnt);
    size_t c = 0;
    for (size_t i = 0; i < orders.size(); ++i)
        if (orders[i] != 0)
            m.at(i, c++) = orders[i];
    return m;
}

Int lattice_index(const Mat& basis) {
    SNF s = smith_normal_form(basis);
    if (s.rank < basis.rows)
        return 0;  // not full rank: infinite index
    Int idx = 1;
    for (size_t i = 0; i < s.rank; ++i)
        idx *= s.D.at(i, i);
    return idx;
}

Mat preimage_lattice(const Mat& m, const std::vector<Int>& orders) {
    Mat ext(m.rows, m.cols + orders.size());
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j)
            ext.at(i, j) = m.at(i, j);
    for (size_t i = 0; i < orders.size(); ++i)
        ext.at(i, m.cols + i) = orders[i];
    Mat full = kernel_basis(ext);
    Mat proj(m.cols, full.cols);
    for (size_t i = 0; i < m.cols; ++i)
        for (size_t j = 0; j < full.cols; ++j)
            proj.at(i, j) = full.at(i, j);
    return column_lattice_basis(proj);
}

Int kernel_size(const Mat& m, const std::vector<Int>& orders_src,
                const std::vector<Int>& orders_dst) {
    Mat pre = preimage_lattice(m, orders_dst);
    Int idx_pre = lattice_index(pre);
    Int idx_src = lattice_index(orders_lattice(orders_src));
    if (idx_pre == 0)
        throw InputError("kernel_size: preimage lattice not full rank");
    return idx_src / idx_pre;
}

}  // namespace ro2::descent
