#include "ro2alg/descent/module.hpp"

#include <algorithm>
#include <functional>

#include "ro2alg/errors.hpp"

namespace ro2::descent {

Int Module::size() const {
    Int s = 1;
    for (const Int& d : orders)
        s *= d;
    return s;
}

Elem Module::reduce(Elem x) const {
    for (size_t i = 0; i < x.size(); ++i) {
        x[i] %= orders[i];
        if (x[i] < 0)
            x[i] += orders[i];
    }
    return x;
}

Elem Module::add(const Elem& x, const Elem& y) const {
    Elem z(ngens());
    for (size_t i = 0; i < z.size(); ++i)
        z[i] = x[i] + y[i];
    return reduce(std::move(z));
}

Elem Module::sub(const Elem& x, const Elem& y) const {
    Elem z(ngens());
    for (size_t i = 0; i < z.size(); ++i)
        z[i] = x[i] - y[i];
    return reduce(std::move(z));
}

Elem Module::unit(size_t i) const {
    Elem e = zero();
    e[i] = 1;
    return e;
}

Elem Module::scalar(const Elem& r, const Elem& m) const {
    Elem z(ngens(), Int(0));
    for (size_t k = 0; k < ring->ngens(); ++k) {
        if (r[k] == 0)
            continue;
        for (size_t i = 0; i < ngens(); ++i) {
            if (m[i] == 0)
                continue;
            for (size_t t = 0; t < ngens(); ++t)
                z[t] += r[k] * m[i] * action[k].at(t, i);
        }
    }
    return reduce(std::move(z));
}

bool Module::is_zero(const Elem& x) const {
    for (const Int& v : x)
        if (v != 0)
            return false;
    return true;
}

std::vector<Elem> Module::elements(long long cap) const {
    if (size() > cap)
        throw InputError("Module: too large to enumerate");
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

Int Module::elem_order(const Elem& x) const {
    Int ord = 1;
    for (size_t i = 0; i < ngens(); ++i) {
        if (x[i] == 0)
            continue;
        Int d = orders[i] / boost::multiprecision::gcd(x[i], orders[i]);
        ord = ord / boost::multiprecision::gcd(ord, d) * d;
    }
    return ord;
}

void Module::check() const {
    const size_t t = ngens();
    if (action.size() != ring->ngens())
        throw InputError("Module: one action matrix per ring generator required");
    for (size_t k = 0; k < action.size(); ++k) {
        if (action[k].rows != t || action[k].cols != t)
            throw InputError("Module: bad action shape");
        // well defined against both sets of orders
        for (size_t j = 0; j < t; ++j) {
            Elem img(t, Int(0));
            for (size_t i = 0; i < t; ++i)
                img[i] = action[k].at(i, j) * orders[j];
            if (!is_zero(reduce(std::move(img))))
                throw InputError("Module: action not well defined");
        }
        Elem probe = zero();
        // ring-order relation: d_k e_k acts as zero
        for (size_t j = 0; j < t; ++j) {
            Elem img(t, Int(0));
            for (size_t i = 0; i < t; ++i)
                img[i] = action[k].at(i, j) * ring->orders[k];
            if (!is_zero(reduce(std::move(img))))
                throw InputError("Module: ring orders do not act by zero");
        }
        (void)probe;
    }
    // multiplicativity on ring generators and unitality
    for (size_t a = 0; a < ring->ngens(); ++a)
        for (size_t b = 0; b < ring->ngens(); ++b) {
            const Elem prod = ring->mul(ring->unit(a), ring->unit(b));
            for (size_t j = 0; j < t; ++j) {
                Elem lhs = scalar(prod, unit(j));
                Elem rhs = scalar(ring->unit(a), scalar(ring->unit(b), unit(j)));
                if (lhs != rhs)
                    throw InputError("Module: action not multiplicative");
            }
        }
    for (size_t j = 0; j < t; ++j)
        if (scalar(ring->one, unit(j)) != unit(j))
            throw InputError("Module: 1 does not act as identity");
}

ModulePtr Module::free_module(const RingPtr& r, int rank) {
    auto m = std::make_shared<Module>();
    m->ring = r;
    const size_t t = r->ngens();
    m->orders.reserve(t * rank);
    for (int c = 0; c < rank; ++c)
        for (const Int& d : r->orders)
            m->orders.push_back(d);
    const size_t n = m->orders.size();
    for (size_t k = 0; k < t; ++k) {
        Mat a(n, n);
        for (int c = 0; c < rank; ++c)
            for (size_t j = 0; j < t; ++j) {
                const Elem img = r->mul(r->unit(k), r->unit(j));
                for (size_t i = 0; i < t; ++i)
                    a.at(c * t + i, c * t + j) = img[i];
            }
        m->action.push_back(std::move(a));
    }
    m->check();
    return m;
}

ModulePtr Module::restriction(const RingPtr& r, const RingMap& f) {
    auto m = std::make_shared<Module>();
    m->ring = f.src;
    m->orders = r->orders;
    const size_t n = r->ngens();
    for (size_t k = 0; k < f.src->ngens(); ++k) {
        Mat a(n, n);
        const Elem fk = f.images[k];
        for (size_t j = 0; j < n; ++j) {
            const Elem img = r->mul(fk, r->unit(j));
            for (size_t i = 0; i < n; ++i)
                a.at(i, j) = img[i];
        }
        m->action.push_back(std::move(a));
    }
    m->check();
    return m;
}

ModulePtr Module::zero_module(const RingPtr& r) {
    auto m = std::make_shared<Module>();
    m->ring = r;
    for (size_t k = 0; k < r->ngens(); ++k)
        m->action.push_back(Mat(0, 0));
    return m;
}

ModulePtr Module::direct_sum(const ModulePtr& a, const ModulePtr& b) {
    if (a->ring != b->ring)
        throw InputError("direct_sum: base rings differ");
    auto m = std::make_shared<Module>();
    m->ring = a->ring;
    m->orders = a->orders;
    m->orders.insert(m->orders.end(), b->orders.begin(), b->orders.end());
    const size_t na = a->ngens(), n = m->orders.size();
    for (size_t k = 0; k < m->ring->ngens(); ++k) {
        Mat mat(n, n);
        for (size_t i = 0; i < na; ++i)
            for (size_t j = 0; j < na; ++j)
                mat.at(i, j) = a->action[k].at(i, j);
        for (size_t i = na; i < n; ++i)
            for (size_t j = na; j < n; ++j)
                mat.at(i, j) = b->action[k].at(i - na, j - na);
        m->action.push_back(std::move(mat));
    }
    m->check();
    return m;
}

ModulePtr Module::cyclic(const RingPtr& r, const std::vector<Elem>& ideal_gens) {
    // present R/(ideal) directly as Z^t / (ideal lattice + orders)
    const size_t t = r->ngens();
    std::vector<Elem> cols;
    for (const Elem& g : ideal_gens)
        for (size_t i = 0; i < t; ++i)
            cols.push_back(r->mul(g, r->unit(i)));
    Mat rel(t, cols.size() + t);
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < t; ++i)
            rel.at(i, j) = cols[j][i];
    for (size_t i = 0; i < t; ++i)
        rel.at(i, cols.size() + i) = r->orders[i];
    SNF s = smith_normal_form(rel);
    std::vector<size_t> keep;
    std::vector<Int> ords;
    for (size_t i = 0; i < t; ++i) {
        Int d = i < s.rank ? s.D.at(i, i) : Int(0);
        if (d == 1)
            continue;
        if (d == 0)
            throw InputError("Module: cyclic quotient must be finite");
        keep.push_back(i);
        ords.push_back(d);
    }
    auto m = std::make_shared<Module>();
    m->ring = r;
    m->orders = ords;
    auto proj = [&](const Elem& x) {
        Elem w(keep.size(), Int(0));
        for (size_t rr = 0; rr < keep.size(); ++rr) {
            for (size_t c = 0; c < t; ++c)
                w[rr] += s.U.at(keep[rr], c) * x[c];
            w[rr] %= ords[rr];
            if (w[rr] < 0)
                w[rr] += ords[rr];
        }
        return w;
    };
    auto lift = [&](size_t rr) {
        Elem x(t, Int(0));
        for (size_t c = 0; c < t; ++c)
            x[c] = s.Uinv.at(c, keep[rr]);
        return r->reduce(std::move(x));
    };
    for (size_t k = 0; k < t; ++k) {
        Mat a(keep.size(), keep.size());
        for (size_t j = 0; j < keep.size(); ++j) {
            Elem img = proj(r->mul(r->unit(k), lift(j)));
            for (size_t i = 0; i < keep.size(); ++i)
                a.at(i, j) = img[i];
        }
        m->action.push_back(std::move(a));
    }
    m->check();
    return m;
}

// ---------------------------------------------------------------------------

Elem ModuleMap::apply(const Elem& x) const {
    Elem y = dst->zero();
    for (size_t i = 0; i < src->ngens(); ++i) {
        if (x[i] == 0)
            continue;
        for (size_t t = 0; t < dst->ngens(); ++t)
            y[t] += x[i] * images[i][t];
    }
    return dst->reduce(std::move(y));
}

void ModuleMap::check_additive() const {
    if (images.size() != src->ngens())
        throw InputError("ModuleMap: wrong number of generator images");
    for (size_t i = 0; i < src->ngens(); ++i) {
        Elem scaled = images[i];
        for (Int& v : scaled)
            v *= src->orders[i];
        if (!dst->is_zero(dst->reduce(std::move(scaled))))
            throw InputError("ModuleMap: not well defined");
    }
}

void ModuleMap::check_linear() const {
    check_additive();
    if (src->ring != dst->ring)
        throw InputError("ModuleMap: rings differ");
    for (size_t k = 0; k < src->ring->ngens(); ++k)
        for (size_t j = 0; j < src->ngens(); ++j) {
            Elem lhs = apply(src->scalar(src->ring->unit(k), src->unit(j)));
            Elem rhs = dst->scalar(src->ring->unit(k), images[j]);
            if (lhs != rhs)
                throw InputError("ModuleMap: not linear");
        }
}

bool ModuleMap::is_bijective() const {
    if (src->size() != dst->size())
        return false;
    Mat m(dst->ngens(), src->ngens());
    for (size_t j = 0; j < src->ngens(); ++j)
        for (size_t i = 0; i < dst->ngens(); ++i)
            m.at(i, j) = images[j][i];
    return kernel_size(m, src->orders, dst->orders) == 1;
}

ModuleMap ModuleMap::after(const ModuleMap& first) const {
    ModuleMap m;
    m.src = first.src;
    m.dst = dst;
    for (const Elem& img : first.images)
        m.images.push_back(apply(img));
    return m;
}

bool ModuleMap::same_map(const ModuleMap& o) const {
    if (src != o.src || dst != o.dst)
        return false;
    for (size_t i = 0; i < images.size(); ++i)
        if (dst->reduce(images[i]) != dst->reduce(o.images[i]))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// tensor machinery

namespace {

struct AbelianTensor {
    std::vector<Int> orders;
    Mat P, S;
};

/// Z^{m x n} pairs modulo both orders and a balancing family
/// (AM_k x (x) y  -  x (x) AN_k y).
AbelianTensor tensor_abelian(const std::vector<Int>& om, const std::vector<Int>& on,
                             const std::vector<std::pair<Mat, Mat>>& balance) {
    const size_t tm = om.size(), tn = on.size(), N = tm * tn;
    std::vector<Elem> cols;
    auto pair_idx = [&](size_t i, size_t j) { return i * tn + j; };
    for (size_t i = 0; i < tm; ++i)
        for (size_t j = 0; j < tn; ++j) {
            {
                Elem c(N, Int(0));
                c[pair_idx(i, j)] = om[i];
                cols.push_back(std::move(c));
            }
            {
                Elem c(N, Int(0));
                c[pair_idx(i, j)] = on[j];
                cols.push_back(std::move(c));
            }
            for (const auto& [am, an] : balance) {
                Elem c(N, Int(0));
                for (size_t s = 0; s < tm; ++s)
                    c[pair_idx(s, j)] += am.at(s, i);
                for (size_t s = 0; s < tn; ++s)
                    c[pair_idx(i, s)] -= an.at(s, j);
                cols.push_back(std::move(c));
            }
        }
    Mat rel(N, cols.size());
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < N; ++i)
            rel.at(i, j) = cols[j][i];
    SNF s = smith_normal_form(rel);

    AbelianTensor out;
    std::vector<size_t> keep;
    for (size_t i = 0; i < N; ++i) {
        Int d = i < s.rank ? s.D.at(i, i) : Int(0);
        if (d == 1)
            continue;
        if (d == 0)
            throw InputError("tensor: result must be finite");
        keep.push_back(i);
        out.orders.push_back(d);
    }
    out.P = Mat(keep.size(), N);
    out.S = Mat(N, keep.size());
    for (size_t r = 0; r < keep.size(); ++r)
        for (size_t c = 0; c < N; ++c) {
            out.P.at(r, c) = s.U.at(keep[r], c);
            out.S.at(c, r) = s.Uinv.at(c, keep[r]);
        }
    return out;
}

Elem project_pair(const Mat& P, const std::vector<Int>& orders, const Elem& pair_vec) {
    Elem w = P.apply(pair_vec);
    for (size_t i = 0; i < w.size(); ++i) {
        w[i] %= orders[i];
        if (w[i] < 0)
            w[i] += orders[i];
    }
    return w;
}

Elem pure_pair_vec(size_t tn, const Elem& x, const Elem& y) {
    Elem v(x.size() * tn, Int(0));
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0)
            continue;
        for (size_t j = 0; j < tn; ++j)
            v[i * tn + j] = x[i] * y[j];
    }
    return v;
}

}  // namespace

Elem Tensor::pure(const Module& m, const Module& n, const Elem& x, const Elem& y) const {
    return project_pair(P, result->orders, pure_pair_vec(n.ngens(), x, y));
}

Tensor tensor_modules(const Module& m, const Module& n) {
    if (m.ring != n.ring)
        throw InputError("tensor: base rings differ");
    std::vector<std::pair<Mat, Mat>> balance;
    for (size_t k = 0; k < m.ring->ngens(); ++k)
        balance.push_back({m.action[k], n.action[k]});
    AbelianTensor t = tensor_abelian(m.orders, n.orders, balance);

    auto mod = std::make_shared<Module>();
    mod->ring = m.ring;
    mod->orders = t.orders;
    const size_t tn = n.ngens();
    for (size_t k = 0; k < m.ring->ngens(); ++k) {
        // act through the left factor on lifted representatives
        Mat a(t.orders.size(), t.orders.size());
        for (size_t col = 0; col < t.orders.size(); ++col) {
            Elem lift(m.ngens() * tn, Int(0));
            for (size_t i = 0; i < lift.size(); ++i)
                lift[i] = t.S.at(i, col);
            Elem moved(lift.size(), Int(0));
            for (size_t i = 0; i < m.ngens(); ++i)
                for (size_t j = 0; j < tn; ++j) {
                    const Int& c = lift[i * tn + j];
                    if (c == 0)
                        continue;
                    for (size_t s = 0; s < m.ngens(); ++s)
                        moved[s * tn + j] += c * m.action[k].at(s, i);
                }
            Elem img = project_pair(t.P, t.orders, moved);
            for (size_t row = 0; row < t.orders.size(); ++row)
                a.at(row, col) = img[row];
        }
        mod->action.push_back(std::move(a));
    }
    mod->check();

    Tensor out;
    out.result = mod;
    out.P = t.P;
    out.S = t.S;
    return out;
}

Elem BaseChange::pure(const Elem& x, const Elem& s) const {
    return project_pair(P, result->orders, pure_pair_vec(f.dst->ngens(), x, s));
}

BaseChange base_change(const ModulePtr& m, const RingMap& f) {
    if (m->ring != f.src)
        throw InputError("base_change: module is not over the source ring");
    const RingPtr& S = f.dst;
    // balancing over the source ring: a . x (x) s = x (x) f(a) s
    std::vector<std::pair<Mat, Mat>> balance;
    for (size_t k = 0; k < f.src->ngens(); ++k) {
        Mat right(S->ngens(), S->ngens());
        for (size_t j = 0; j < S->ngens(); ++j) {
            Elem img = S->mul(f.images[k], S->unit(j));
            for (size_t i = 0; i < S->ngens(); ++i)
                right.at(i, j) = img[i];
        }
        balance.push_back({m->action[k], std::move(right)});
    }
    AbelianTensor t = tensor_abelian(m->orders, S->orders, balance);

    auto mod = std::make_shared<Module>();
    mod->ring = S;
    mod->orders = t.orders;
    const size_t tn = S->ngens();
    for (size_t k = 0; k < tn; ++k) {
        Mat a(t.orders.size(), t.orders.size());
        for (size_t col = 0; col < t.orders.size(); ++col) {
            Elem lift(m->ngens() * tn, Int(0));
            for (size_t i = 0; i < lift.size(); ++i)
                lift[i] = t.S.at(i, col);
            Elem moved(lift.size(), Int(0));
            for (size_t i = 0; i < m->ngens(); ++i)
                for (size_t j = 0; j < tn; ++j) {
                    const Int& c = lift[i * tn + j];
                    if (c == 0)
                        continue;
                    Elem prod = S->mul(S->unit(k), S->unit(j));
                    for (size_t s2 = 0; s2 < tn; ++s2)
                        moved[i * tn + s2] += c * prod[s2];
                }
            Elem img = project_pair(t.P, t.orders, moved);
            for (size_t row = 0; row < t.orders.size(); ++row)
                a.at(row, col) = img[row];
        }
        mod->action.push_back(std::move(a));
    }
    mod->check();

    BaseChange out;
    out.result = mod;
    out.P = t.P;
    out.S = t.S;
    out.m = m;
    out.f = f;
    return out;
}

Elem TensorRing::pure(const Ring& b1, const Ring& b2, const Elem& x, const Elem& y) const {
    Elem v = pure_pair_vec(b2.ngens(), x, y);
    Elem w = P.apply(v);
    for (size_t i = 0; i < w.size(); ++i) {
        w[i] %= result->orders[i];
        if (w[i] < 0)
            w[i] += result->orders[i];
    }
    return w;
}

TensorRing tensor_ring(const RingMap& a_to_b1, const RingMap& a_to_b2) {
    if (a_to_b1.src != a_to_b2.src)
        throw InputError("tensor_ring: the two algebras have different base rings");
    const RingPtr& B1 = a_to_b1.dst;
    const RingPtr& B2 = a_to_b2.dst;
    std::vector<std::pair<Mat, Mat>> balance;
    for (size_t k = 0; k < a_to_b1.src->ngens(); ++k) {
        Mat left(B1->ngens(), B1->ngens()), right(B2->ngens(), B2->ngens());
        for (size_t j = 0; j < B1->ngens(); ++j) {
            Elem img = B1->mul(a_to_b1.images[k], B1->unit(j));
            for (size_t i = 0; i < B1->ngens(); ++i)
                left.at(i, j) = img[i];
        }
        for (size_t j = 0; j < B2->ngens(); ++j) {
            Elem img = B2->mul(a_to_b2.images[k], B2->unit(j));
            for (size_t i = 0; i < B2->ngens(); ++i)
                right.at(i, j) = img[i];
        }
        balance.push_back({std::move(left), std::move(right)});
    }
    AbelianTensor t = tensor_abelian(B1->orders, B2->orders, balance);

    const size_t tn = B2->ngens();
    auto ring = std::make_shared<Ring>();
    ring->orders = t.orders;
    ring->name = B1->name + "(x)" + B2->name;

    auto lift_of = [&](size_t col) {
        Elem lift(B1->ngens() * tn, Int(0));
        for (size_t i = 0; i < lift.size(); ++i)
            lift[i] = t.S.at(i, col);
        return lift;
    };
    auto proj = [&](const Elem& pair_vec) { return project_pair(t.P, t.orders, pair_vec); };

    // multiplication: distribute pure tensors (x (x) y)(x' (x) y') = xx' (x) yy'
    const size_t tg = t.orders.size();
    ring->mul_table.assign(tg, std::vector<Elem>(tg));
    for (size_t s1 = 0; s1 < tg; ++s1) {
        Elem l1 = lift_of(s1);
        for (size_t s2 = 0; s2 < tg; ++s2) {
            Elem l2 = lift_of(s2);
            Elem acc(B1->ngens() * tn, Int(0));
            for (size_t i1 = 0; i1 < B1->ngens(); ++i1)
                for (size_t j1 = 0; j1 < tn; ++j1) {
                    const Int& c1 = l1[i1 * tn + j1];
                    if (c1 == 0)
                        continue;
                    for (size_t i2 = 0; i2 < B1->ngens(); ++i2)
                        for (size_t j2 = 0; j2 < tn; ++j2) {
                            const Int& c2 = l2[i2 * tn + j2];
                            if (c2 == 0)
                                continue;
                            Elem x = B1->mul(B1->unit(i1), B1->unit(i2));
                            Elem y = B2->mul(B2->unit(j1), B2->unit(j2));
                            Int c = c1 * c2;
                            for (size_t i = 0; i < B1->ngens(); ++i) {
                                if (x[i] == 0)
                                    continue;
                                for (size_t j = 0; j < tn; ++j)
                                    acc[i * tn + j] += c * x[i] * y[j];
                            }
                        }
                }
            ring->mul_table[s1][s2] = proj(acc);
        }
    }

    TensorRing out;
    out.P = t.P;
    out.S = t.S;

    // identities and inclusions
    {
        Elem one_pair = pure_pair_vec(tn, B1->one, B2->one);
        ring->one = proj(one_pair);
    }
    ring->check();
    out.result = ring;

    out.f1.src = B1;
    out.f1.dst = ring;
    for (size_t i = 0; i < B1->ngens(); ++i)
        out.f1.images.push_back(proj(pure_pair_vec(tn, B1->unit(i), B2->one)));
    out.f1.check();
    out.f2.src = B2;
    out.f2.dst = ring;
    for (size_t j = 0; j < tn; ++j)
        out.f2.images.push_back(proj(pure_pair_vec(tn, B1->one, B2->unit(j))));
    out.f2.check();
    out.unit = out.f1.after(a_to_b1);
    if (!out.unit.same_map(out.f2.after(a_to_b2)))
        throw InputError("tensor_ring: the two unit maps disagree");
    return out;
}

// ---------------------------------------------------------------------------

Subquotient subquotient(const Mat& k_basis, const std::vector<Int>& ambient_orders) {
    const size_t n = ambient_orders.size();
    // relations of the subgroup: solve K z = d_i e_i for each ambient order
    Mat L = orders_lattice(ambient_orders);
    Mat Z(k_basis.cols, L.cols);
    for (size_t j = 0; j < L.cols; ++j) {
        std::vector<Int> col(n);
        for (size_t i = 0; i < n; ++i)
            col[i] = L.at(i, j);
        auto sol = solve_integer(k_basis, col);
        if (!sol)
            throw InputError("subquotient: orders lattice does not lie in the sublattice");
        for (size_t i = 0; i < k_basis.cols; ++i)
            Z.at(i, j) = (*sol)[i];
    }
    SNF s = smith_normal_form(Z);
    Subquotient out;
    out.sub_basis = k_basis;
    std::vector<size_t> keep;
    for (size_t i = 0; i < k_basis.cols; ++i) {
        Int d = i < s.rank ? s.D.at(i, i) : Int(0);
        if (d == 1)
            continue;
        if (d == 0)
            throw InputError("subquotient: infinite quotient");
        keep.push_back(i);
        out.orders.push_back(d);
    }
    // embed: ambient coords of each generator: K * Uinv e_keep
    out.embed = Mat(n, keep.size());
    for (size_t g = 0; g < keep.size(); ++g) {
        std::vector<Int> w(k_basis.cols, Int(0));
        for (size_t r = 0; r < k_basis.cols; ++r)
            w[r] = s.Uinv.at(r, keep[g]);
        std::vector<Int> amb = k_basis.apply(w);
        for (size_t i = 0; i < n; ++i)
            out.embed.at(i, g) = amb[i];
    }
    out.restrictU = Mat(keep.size(), k_basis.cols);
    for (size_t g = 0; g < keep.size(); ++g)
        for (size_t c = 0; c < k_basis.cols; ++c)
            out.restrictU.at(g, c) = s.U.at(keep[g], c);
    return out;
}

Elem Subquotient::restrict_elem(const Elem& ambient) const {
    auto sol = solve_integer(sub_basis, ambient);
    if (!sol)
        throw InputError("subquotient: element is not in the subgroup");
    Elem w = restrictU.apply(*sol);
    for (size_t i = 0; i < w.size(); ++i) {
        w[i] %= orders[i];
        if (w[i] < 0)
            w[i] += orders[i];
    }
    return w;
}

// ---------------------------------------------------------------------------

std::optional<ModuleMap> find_module_iso(const ModulePtr& a, const ModulePtr& b,
                                         const Mat* sigma_a, const Mat* sigma_b,
                                         long long budget) {
    if (a->ring != b->ring)
        return std::nullopt;
    if (a->size() != b->size())
        return std::nullopt;
    {
        std::vector<Int> oa = a->orders, ob = b->orders;
        std::sort(oa.begin(), oa.end());
        std::sort(ob.begin(), ob.end());
        if (oa != ob)
            return std::nullopt;
    }
    if (a->size() == 1)
        return ModuleMap{a, b, std::vector<Elem>(a->ngens(), b->zero())};

    std::vector<Elem> belems = b->elements(1 << 14);
    const size_t t = a->ngens();
    std::vector<Elem> images(t);
    long long steps = 0;

    // subgroup sizes of partial spans in a, for pruning
    auto span_size = [&](const Module& m, const std::vector<Elem>& gens) {
        std::vector<Elem> seen = {m.zero()};
        std::vector<Elem> frontier = seen;
        while (!frontier.empty()) {
            std::vector<Elem> next;
            for (const Elem& x : frontier)
                for (const Elem& g : gens) {
                    Elem y = m.add(x, g);
                    if (std::find(seen.begin(), seen.end(), y) == seen.end()) {
                        seen.push_back(y);
                        next.push_back(y);
                    }
                }
            frontier = std::move(next);
        }
        return seen.size();
    };
    std::vector<size_t> span_a(t + 1);
    {
        std::vector<Elem> gens;
        span_a[0] = 1;
        for (size_t i = 0; i < t; ++i) {
            gens.push_back(a->unit(i));
            span_a[i + 1] = span_size(*a, gens);
        }
    }

    auto full_check = [&]() -> bool {
        ModuleMap m{a, b, images};
        try {
            m.check_linear();
        } catch (const Error&) {
            return false;
        }
        if (!m.is_bijective())
            return false;
        if (sigma_a && sigma_b) {
            // commute with the paired semilinear generator
            for (size_t j = 0; j < t; ++j) {
                Elem sx(t, Int(0));
                for (size_t i = 0; i < t; ++i)
                    sx[i] = sigma_a->at(i, j);
                Elem lhs = m.apply(a->reduce(std::move(sx)));
                Elem img = m.images[j];
                Elem rhs(b->ngens(), Int(0));
                for (size_t i = 0; i < b->ngens(); ++i)
                    for (size_t s2 = 0; s2 < b->ngens(); ++s2)
                        rhs[i] += sigma_b->at(i, s2) * img[s2];
                if (lhs != b->reduce(std::move(rhs)))
                    return false;
            }
        }
        return true;
    };

    std::function<std::optional<ModuleMap>(size_t, std::vector<Elem>&)> rec =
        [&](size_t i, std::vector<Elem>& partial) -> std::optional<ModuleMap> {
        if (i == t)
            return full_check() ? std::optional<ModuleMap>(ModuleMap{a, b, images})
                                : std::nullopt;
        for (const Elem& cand : belems) {
            if (++steps > budget)
                return std::nullopt;
            if (b->elem_order(cand) != a->elem_order(a->unit(i)))
                continue;
            partial.push_back(cand);
            if (span_size(*b, partial) == span_a[i + 1]) {
                images[i] = cand;
                auto found = rec(i + 1, partial);
                if (found)
                    return found;
            }
            partial.pop_back();
        }
        return std::nullopt;
    };
    std::vector<Elem> partial;
    return rec(0, partial);
}

}  // namespace ro2::descent
