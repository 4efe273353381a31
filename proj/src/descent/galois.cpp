#include "ro2alg/descent/galois.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "ro2alg/errors.hpp"

namespace ro2::descent {

namespace {

std::vector<Int> repeat_orders(const std::vector<Int>& orders, int times) {
    std::vector<Int> out;
    for (int i = 0; i < times; ++i)
        out.insert(out.end(), orders.begin(), orders.end());
    return out;
}

}  // namespace

void SemilinearModule::check(const GroupAction& act) const {
    const Module& n = *module;
    const size_t t = n.ngens();
    if (sigma.size() != static_cast<size_t>(act.group.order))
        throw InputError("SemilinearModule: one matrix per group element required");
    auto apply = [&](const Mat& m, const Elem& x) {
        Elem y = m.apply(x);
        return n.reduce(std::move(y));
    };
    // identity, composition, semilinearity, well-definedness
    for (size_t j = 0; j < t; ++j)
        if (apply(sigma[act.group.id], n.unit(j)) != n.unit(j))
            throw InputError("SemilinearModule: sigma_e is not the identity");
    for (int g = 0; g < act.group.order; ++g) {
        for (size_t j = 0; j < t; ++j) {
            Elem scaled = apply(sigma[g], n.unit(j));
            for (Int& v : scaled)
                v *= n.orders[j];
            if (!n.is_zero(n.reduce(std::move(scaled))))
                throw InputError("SemilinearModule: sigma not well defined");
        }
        for (int h = 0; h < act.group.order; ++h)
            for (size_t j = 0; j < t; ++j)
                if (apply(sigma[act.group.op(g, h)], n.unit(j)) !=
                    apply(sigma[g], apply(sigma[h], n.unit(j))))
                    throw InputError("SemilinearModule: sigma_{gh} != sigma_g sigma_h");
        for (size_t k = 0; k < n.ring->ngens(); ++k)
            for (size_t j = 0; j < t; ++j) {
                Elem lhs = apply(sigma[g], n.scalar(n.ring->unit(k), n.unit(j)));
                Elem rhs = n.scalar(act.of(g).images[k], apply(sigma[g], n.unit(j)));
                if (lhs != rhs)
                    throw InputError("SemilinearModule: semilinearity fails");
            }
    }
}

GaloisContext::GaloisContext(RingMap f, GroupAction act)
    : f_(std::move(f)), act_(std::move(act)), tens_(tensor_ring(f_, f_)) {
    f_.check();
    act_.check();
    if (act_.ring != f_.dst)
        throw InputError("GaloisContext: action must live on the target ring");
    for (int g = 0; g < act_.group.order; ++g)
        for (const Elem& img : f_.images)
            if (act_.of(g).apply(img) != f_.dst->reduce(img))
                throw InputError("GaloisContext: action does not fix the image of A");

    const RingPtr& B = f_.dst;
    const RingPtr& T = tens_.result;
    const size_t tb = B->ngens(), tt = T->ngens();

    // pi_g(x (x) y) = x g(y), assembled on tensor generators through the section
    for (int g = 0; g < act_.group.order; ++g) {
        RingMap pg;
        pg.src = T;
        pg.dst = B;
        for (size_t col = 0; col < tt; ++col) {
            Elem img = B->zero();
            for (size_t i = 0; i < tb; ++i)
                for (size_t j = 0; j < tb; ++j) {
                    const Int& c = tens_.S.at(i * tb + j, col);
                    if (c == 0)
                        continue;
                    Elem term = B->mul(B->unit(i), act_.of(g).apply(B->unit(j)));
                    for (size_t s = 0; s < tb; ++s)
                        img[s] += c * term[s];
                }
            pg.images.push_back(B->reduce(std::move(img)));
        }
        pg.check();
        pi_.push_back(std::move(pg));
    }

    // i : A -> B^G
    {
        const int good = act_.group.order - 1;
        Mat stacked(tb * std::max(good, 1), tb);
        size_t row = 0;
        for (int g = 0; g < act_.group.order; ++g) {
            if (g == act_.group.id)
                continue;
            for (size_t i = 0; i < tb; ++i) {
                for (size_t j = 0; j < tb; ++j)
                    stacked.at(row + i, j) = act_.of(g).images[j][i] - (i == j ? 1 : 0);
            }
            row += tb;
        }
        std::vector<Int> dst_orders = repeat_orders(B->orders, std::max(good, 1));
        Mat fixed = good == 0 ? Mat::identity(tb) : preimage_lattice(stacked, dst_orders);
        Int idx_fixed = lattice_index(fixed);
        Int idx_all = lattice_index(orders_lattice(B->orders));
        report_.fixed_ring_size = idx_all / idx_fixed;
        Mat fmat(tb, f_.src->ngens());
        for (size_t j = 0; j < f_.src->ngens(); ++j)
            for (size_t i = 0; i < tb; ++i)
                fmat.at(i, j) = f_.images[j][i];
        bool injective = kernel_size(fmat, f_.src->orders, B->orders) == 1;
        report_.fixed_ring_iso = injective && report_.fixed_ring_size == f_.src->size();
        if (!report_.fixed_ring_iso)
            report_.diagnostics += "i: |B^G| = " + report_.fixed_ring_size.str() +
                                   ", |A| = " + f_.src->size().str() +
                                   (injective ? "" : ", f not injective") + "; ";
    }

    // h : T -> prod_G B through the components pi_g
    {
        const int n = act_.group.order;
        Mat h(tb * n, tt);
        for (int g = 0; g < n; ++g)
            for (size_t col = 0; col < tt; ++col)
                for (size_t i = 0; i < tb; ++i)
                    h.at(g * tb + i, col) = pi_[g].images[col][i];
        report_.h_matrix = h;
        std::vector<Int> prod_orders = repeat_orders(B->orders, n);
        Int prod_size = 1;
        for (const Int& d : prod_orders)
            prod_size *= d;
        bool sizes = prod_size == T->size();
        bool injective = kernel_size(h, T->orders, prod_orders) == 1;
        report_.h_iso = sizes && injective;
        if (!report_.h_iso) {
            report_.diagnostics += "h: |T| = " + T->size().str() + ", |prod| = " +
                                   prod_size.str() +
                                   (injective ? "" : ", h not injective") + "; ";
        } else {
            // witness: solve h x = e_i modulo the product orders
            Mat ext(h.rows, h.cols + prod_orders.size());
            for (size_t i = 0; i < h.rows; ++i)
                for (size_t j = 0; j < h.cols; ++j)
                    ext.at(i, j) = h.at(i, j);
            for (size_t i = 0; i < prod_orders.size(); ++i)
                ext.at(i, h.cols + i) = prod_orders[i];
            report_.h_inverse = Mat(tt, h.rows);
            for (size_t i = 0; i < h.rows; ++i) {
                std::vector<Int> e(h.rows, Int(0));
                e[i] = 1;
                auto sol = solve_integer(ext, e);
                if (!sol)
                    throw InputError("GaloisContext: h bijectivity witness failed");
                for (size_t r = 0; r < tt; ++r) {
                    Int v = (*sol)[r] % T->orders[r];
                    if (v < 0)
                        v += T->orders[r];
                    report_.h_inverse.at(r, i) = v;
                }
            }
        }
    }
}

GaloisReport is_galois(const RingMap& f, const GroupAction& act) {
    return GaloisContext(f, act).report();
}

// ---------------------------------------------------------------------------
// descent data

namespace {

/// phi(n (x) 1) for each generator of N, as elements of the target side.
std::vector<Elem> phi_on_canonical(const DescentDatum& d) {
    std::vector<Elem> out;
    for (size_t k = 0; k < d.module->ngens(); ++k)
        out.push_back(d.phi.apply(d.side1.canonical(d.module->unit(k))));
    return out;
}

/// Pull a datum map back along psi : T -> T3, between prebuilt base changes
/// of N along psi o phi1 and psi o phi2.
ModuleMap pullback_datum(const DescentDatum& d, const RingMap& psi, const BaseChange& src3,
                         const BaseChange& dst3) {
    const Module& n = *d.module;
    const size_t tn = n.ngens();
    const size_t tt = d.side2.f.dst->ngens();  // T generators
    std::vector<Elem> phi_can = phi_on_canonical(d);

    ModuleMap out;
    out.src = src3.result;
    out.dst = dst3.result;
    const size_t t3 = psi.dst->ngens();
    for (size_t col = 0; col < src3.result->ngens(); ++col) {
        Elem acc = dst3.result->zero();
        // src3 generator = sum of pure tensors n_k (x) t3_l
        for (size_t k = 0; k < tn; ++k)
            for (size_t l = 0; l < t3; ++l) {
                const Int& c = src3.S.at(k * t3 + l, col);
                if (c == 0)
                    continue;
                // phi(n_k (x) 1) = sum of pure tensors n_p (x) t_q
                for (size_t p = 0; p < tn; ++p)
                    for (size_t q = 0; q < tt; ++q) {
                        // coefficient of the pure tensor in the lift of phi_can
                        Int e = 0;
                        for (size_t g = 0; g < d.side2.result->ngens(); ++g)
                            e += d.side2.S.at(p * tt + q, g) * phi_can[k][g];
                        if (e == 0)
                            continue;
                        Elem t3elem = psi.dst->mul(psi.apply(d.side2.f.dst->unit(q)),
                                                   psi.dst->unit(l));
                        Elem pure = dst3.pure(n.unit(p), t3elem);
                        for (size_t s = 0; s < acc.size(); ++s)
                            acc[s] += c * e * pure[s];
                    }
            }
        out.images.push_back(dst3.result->reduce(std::move(acc)));
    }
    return out;
}

}  // namespace

DescentDatum canonical_datum(const GaloisContext& ctx, const ModulePtr& m_over_a) {
    if (m_over_a->ring != ctx.A())
        throw InputError("canonical_datum: module must live over A");
    BaseChange n = base_change(m_over_a, ctx.f());
    const RingPtr& T = ctx.tensor().result;
    const Ring& B = *ctx.B();

    DescentDatum d;
    d.module = n.result;
    d.side1 = base_change(n.result, ctx.tensor().f1);
    d.side2 = base_change(n.result, ctx.tensor().f2);

    // phi((m (x) b) (x) t) = (m (x) 1) (x) phi1(b) t
    const size_t tn = n.result->ngens();
    const size_t tt = T->ngens();
    const size_t tm = m_over_a->ngens();
    const size_t tb = B.ngens();
    for (size_t col = 0; col < d.side1.result->ngens(); ++col) {
        Elem acc = d.side2.result->zero();
        for (size_t k = 0; k < tn; ++k)
            for (size_t l = 0; l < tt; ++l) {
                const Int& c = d.side1.S.at(k * tt + l, col);
                if (c == 0)
                    continue;
                // n_k = sum of pure tensors m_i (x) b_j
                for (size_t i = 0; i < tm; ++i)
                    for (size_t j = 0; j < tb; ++j) {
                        const Int& e = n.S.at(i * tb + j, k);
                        if (e == 0)
                            continue;
                        Elem tcoef =
                            T->mul(ctx.tensor().f1.apply(B.unit(j)), T->unit(l));
                        Elem m1 = n.pure(m_over_a->unit(i), B.one);
                        Elem pure = d.side2.pure(m1, tcoef);
                        for (size_t s = 0; s < acc.size(); ++s)
                            acc[s] += c * e * pure[s];
                    }
            }
        d.phi.images.push_back(d.side2.result->reduce(std::move(acc)));
    }
    d.phi.src = d.side1.result;
    d.phi.dst = d.side2.result;
    d.phi.check_linear();
    if (!d.phi.is_bijective())
        throw InputError("canonical_datum: phi is not an isomorphism");
    return d;
}

bool check_cocycle(const GaloisContext& ctx, const DescentDatum& d) {
    const RingMap& f = ctx.f();
    const TensorRing& t2 = ctx.tensor();
    TensorRing t3 = tensor_ring(t2.unit, f);  // (B (x) B) (x) B

    const RingMap psi12 = t3.f1;
    RingMap rho1 = t3.f1.after(t2.f1);
    RingMap rho2 = t3.f1.after(t2.f2);
    RingMap rho3 = t3.f2;

    // psi13(x (x) y) = x (x) 1 (x) y ; psi23(x (x) y) = 1 (x) x (x) y
    auto mixed = [&](bool left_through_f1) {
        RingMap psi;
        psi.src = t2.result;
        psi.dst = t3.result;
        const size_t tb = ctx.B()->ngens();
        for (size_t col = 0; col < t2.result->ngens(); ++col) {
            Elem acc = t3.result->zero();
            for (size_t i = 0; i < tb; ++i)
                for (size_t j = 0; j < tb; ++j) {
                    const Int& c = t2.S.at(i * tb + j, col);
                    if (c == 0)
                        continue;
                    Elem first = left_through_f1 ? t2.f1.apply(ctx.B()->unit(i))
                                                 : t2.f2.apply(ctx.B()->unit(i));
                    Elem term = t3.result->mul(t3.f1.apply(first),
                                               t3.f2.apply(ctx.B()->unit(j)));
                    for (size_t s = 0; s < acc.size(); ++s)
                        acc[s] += c * term[s];
                }
            psi.images.push_back(t3.result->reduce(std::move(acc)));
        }
        psi.check();
        return psi;
    };
    RingMap psi13 = mixed(true);
    RingMap psi23 = mixed(false);

    if (!psi13.after(t2.f1).same_map(rho1) || !psi12.after(t2.f1).same_map(rho1) ||
        !psi12.after(t2.f2).same_map(rho2) || !psi23.after(t2.f1).same_map(rho2) ||
        !psi13.after(t2.f2).same_map(rho3) || !psi23.after(t2.f2).same_map(rho3))
        throw InputError("check_cocycle: coface bookkeeping failed");

    BaseChange n1 = base_change(d.module, rho1);
    BaseChange n2 = base_change(d.module, rho2);
    BaseChange n3 = base_change(d.module, rho3);

    ModuleMap m12 = pullback_datum(d, psi12, n1, n2);
    ModuleMap m23 = pullback_datum(d, psi23, n2, n3);
    ModuleMap m13 = pullback_datum(d, psi13, n1, n3);
    ModuleMap composite = m23.after(m12);
    if (!composite.same_map(m13))
        return false;
    // exhaustive confirmation on small modules
    if (n1.result->size() <= 4096) {
        for (const Elem& x : n1.result->elements())
            if (composite.apply(x) != m13.apply(x))
                return false;
    }
    return true;
}

SemilinearModule datum_to_action(const GaloisContext& ctx, const DescentDatum& d) {
    if (!ctx.galois())
        throw InputError("datum_to_action: the extension is not Galois");
    const Module& n = *d.module;
    const size_t tn = n.ngens();
    const size_t tt = ctx.tensor().result->ngens();
    const Group& G = ctx.action().group;
    std::vector<Elem> phi_can = phi_on_canonical(d);

    SemilinearModule out;
    out.module = d.module;
    for (int g = 0; g < G.order; ++g) {
        int ginv = G.inverse(g);
        Mat m(tn, tn);
        for (size_t k = 0; k < tn; ++k) {
            // sigma_g(n_k) = sum c_pq act_g(pi_{g^{-1}}(t_q)) . n_p
            Elem acc = n.zero();
            for (size_t p = 0; p < tn; ++p)
                for (size_t q = 0; q < tt; ++q) {
                    Int e = 0;
                    for (size_t c = 0; c < d.side2.result->ngens(); ++c)
                        e += d.side2.S.at(p * tt + q, c) * phi_can[k][c];
                    if (e == 0)
                        continue;
                    Elem scalar = ctx.action().of(g).apply(
                        ctx.pi(ginv).apply(ctx.tensor().result->unit(q)));
                    Elem term = n.scalar(scalar, n.unit(p));
                    for (size_t s = 0; s < tn; ++s)
                        acc[s] += e * term[s];
                }
            acc = n.reduce(std::move(acc));
            for (size_t s = 0; s < tn; ++s)
                m.at(s, k) = acc[s];
        }
        out.sigma.push_back(std::move(m));
    }
    out.check(ctx.action());
    return out;
}

DescentDatum action_to_datum(const GaloisContext& ctx, const SemilinearModule& s) {
    if (!ctx.galois())
        throw InputError("action_to_datum: the extension is not Galois");
    const Module& n = *s.module;
    const size_t tn = n.ngens();
    const Group& G = ctx.action().group;
    const RingPtr& T = ctx.tensor().result;
    const size_t tt = T->ngens();

    DescentDatum d;
    d.module = s.module;
    d.side1 = base_change(s.module, ctx.tensor().f1);
    d.side2 = base_change(s.module, ctx.tensor().f2);

    // Psi : N (x)_{phi2} T -> prod_g N, components tau_g (id (x) pi_g)
    const size_t t2 = d.side2.result->ngens();
    Mat psi(tn * G.order, t2);
    for (size_t col = 0; col < t2; ++col) {
        for (int g = 0; g < G.order; ++g) {
            int ginv = G.inverse(g);
            Elem acc = n.zero();
            for (size_t p = 0; p < tn; ++p)
                for (size_t q = 0; q < tt; ++q) {
                    const Int& c = d.side2.S.at(p * tt + q, col);
                    if (c == 0)
                        continue;
                    Elem scal = ctx.action().of(ginv).apply(ctx.pi(g).apply(T->unit(q)));
                    Elem term = n.scalar(scal, n.unit(p));
                    for (size_t t = 0; t < tn; ++t)
                        acc[t] += c * term[t];
                }
            acc = n.reduce(std::move(acc));
            for (size_t t = 0; t < tn; ++t)
                psi.at(g * tn + t, col) = acc[t];
        }
    }

    // phi(n_k (x) 1): solve Psi x = (component at g: sigma_{g^{-1}}(n_k))
    std::vector<Int> prod_orders = repeat_orders(n.orders, G.order);
    Mat ext(psi.rows, psi.cols + prod_orders.size());
    for (size_t i = 0; i < psi.rows; ++i)
        for (size_t j = 0; j < psi.cols; ++j)
            ext.at(i, j) = psi.at(i, j);
    for (size_t i = 0; i < prod_orders.size(); ++i)
        ext.at(i, psi.cols + i) = prod_orders[i];

    std::vector<Elem> phi_can(tn);
    for (size_t k = 0; k < tn; ++k) {
        std::vector<Int> target(psi.rows, Int(0));
        for (int g = 0; g < G.order; ++g) {
            int ginv = G.inverse(g);
            Elem comp = n.reduce(s.sigma[ginv].apply(n.unit(k)));
            for (size_t t = 0; t < tn; ++t)
                target[g * tn + t] = comp[t];
        }
        auto sol = solve_integer(ext, target);
        if (!sol)
            throw InputError("action_to_datum: the action does not glue to a datum");
        Elem x(t2, Int(0));
        for (size_t r = 0; r < t2; ++r)
            x[r] = (*sol)[r];
        phi_can[k] = d.side2.result->reduce(std::move(x));
    }

    // extend T-linearly over the side1 generators
    for (size_t col = 0; col < d.side1.result->ngens(); ++col) {
        Elem acc = d.side2.result->zero();
        for (size_t k = 0; k < tn; ++k)
            for (size_t l = 0; l < tt; ++l) {
                const Int& c = d.side1.S.at(k * tt + l, col);
                if (c == 0)
                    continue;
                Elem term = d.side2.result->scalar(T->unit(l), phi_can[k]);
                for (size_t t = 0; t < acc.size(); ++t)
                    acc[t] += c * term[t];
            }
        d.phi.images.push_back(d.side2.result->reduce(std::move(acc)));
    }
    d.phi.src = d.side1.result;
    d.phi.dst = d.side2.result;
    d.phi.check_linear();
    if (!d.phi.is_bijective())
        throw InputError("action_to_datum: phi is not an isomorphism");
    return d;
}

SemilinearModule extend(const GaloisContext& ctx, const ModulePtr& m_over_a) {
    if (m_over_a->ring != ctx.A())
        throw InputError("extend: module must live over A");
    BaseChange n = base_change(m_over_a, ctx.f());
    const size_t tm = m_over_a->ngens();
    const size_t tb = ctx.B()->ngens();
    const size_t tn = n.result->ngens();

    SemilinearModule out;
    out.module = n.result;
    for (int g = 0; g < ctx.action().group.order; ++g) {
        Mat m(tn, tn);
        for (size_t col = 0; col < tn; ++col) {
            Elem acc = n.result->zero();
            for (size_t i = 0; i < tm; ++i)
                for (size_t j = 0; j < tb; ++j) {
                    const Int& c = n.S.at(i * tb + j, col);
                    if (c == 0)
                        continue;
                    Elem pure = n.pure(m_over_a->unit(i),
                                       ctx.action().of(g).apply(ctx.B()->unit(j)));
                    for (size_t t = 0; t < tn; ++t)
                        acc[t] += c * pure[t];
                }
            acc = n.result->reduce(std::move(acc));
            for (size_t t = 0; t < tn; ++t)
                m.at(t, col) = acc[t];
        }
        out.sigma.push_back(std::move(m));
    }
    out.check(ctx.action());
    return out;
}

Descended descend(const GaloisContext& ctx, const SemilinearModule& s) {
    const Module& n = *s.module;
    const size_t tn = n.ngens();
    const Group& G = ctx.action().group;
    int nontrivial = 0;
    for (int g = 0; g < G.order; ++g)
        if (g != G.id)
            ++nontrivial;
    Mat stacked(tn * std::max(nontrivial, 1), tn);
    size_t row = 0;
    for (int g = 0; g < G.order; ++g) {
        if (g == G.id)
            continue;
        for (size_t i = 0; i < tn; ++i)
            for (size_t j = 0; j < tn; ++j)
                stacked.at(row + i, j) = s.sigma[g].at(i, j) - (i == j ? 1 : 0);
        row += tn;
    }
    std::vector<Int> dst_orders = repeat_orders(n.orders, std::max(nontrivial, 1));
    Mat fixed = nontrivial == 0 ? Mat::identity(tn) : preimage_lattice(stacked, dst_orders);
    Subquotient sq = subquotient(fixed, n.orders);

    auto mod = std::make_shared<Module>();
    mod->ring = ctx.A();
    mod->orders = sq.orders;
    for (size_t k = 0; k < ctx.A()->ngens(); ++k) {
        Mat a(sq.orders.size(), sq.orders.size());
        for (size_t col = 0; col < sq.orders.size(); ++col) {
            Elem amb(tn, Int(0));
            for (size_t i = 0; i < tn; ++i)
                amb[i] = sq.embed.at(i, col);
            Elem moved = n.scalar(ctx.f().images[k], n.reduce(std::move(amb)));
            // the scalar action preserves the fixed lattice; restrict needs an
            // honest lattice representative, so lift the reduced element back
            Elem img = sq.restrict_elem(moved);
            for (size_t i = 0; i < sq.orders.size(); ++i)
                a.at(i, col) = img[i];
        }
        mod->action.push_back(std::move(a));
    }
    mod->check();
    return Descended{mod, sq.embed};
}

bool unit_is_iso(const GaloisContext& ctx, const ModulePtr& m_over_a) {
    SemilinearModule s = extend(ctx, m_over_a);
    Descended dd = descend(ctx, s);
    BaseChange n = base_change(m_over_a, ctx.f());
    // m -> m (x) 1 into the fixed points, solved against the embedding
    ModuleMap unit;
    unit.src = m_over_a;
    unit.dst = dd.module;
    for (size_t i = 0; i < m_over_a->ngens(); ++i) {
        Elem amb = n.canonical(m_over_a->unit(i));
        std::vector<Int> target(amb.begin(), amb.end());
        // solve embed * x = amb modulo N orders
        Mat ext(dd.embed.rows, dd.embed.cols + s.module->orders.size());
        for (size_t r = 0; r < dd.embed.rows; ++r)
            for (size_t c = 0; c < dd.embed.cols; ++c)
                ext.at(r, c) = dd.embed.at(r, c);
        for (size_t r = 0; r < s.module->orders.size(); ++r)
            ext.at(r, dd.embed.cols + r) = s.module->orders[r];
        auto sol = solve_integer(ext, target);
        if (!sol)
            return false;
        Elem img(dd.module->ngens(), Int(0));
        for (size_t r = 0; r < dd.module->ngens(); ++r)
            img[r] = (*sol)[r];
        unit.images.push_back(dd.module->reduce(std::move(img)));
    }
    try {
        unit.check_linear();
    } catch (const Error&) {
        return false;
    }
    return unit.is_bijective();
}

bool counit_is_iso(const GaloisContext& ctx, const SemilinearModule& s) {
    Descended dd = descend(ctx, s);
    BaseChange e = base_change(dd.module, ctx.f());
    const Module& n = *s.module;
    const size_t td = dd.module->ngens();
    const size_t tb = ctx.B()->ngens();
    // (d (x) b) -> b . embed(d)
    ModuleMap counit;
    counit.src = e.result;
    counit.dst = s.module;
    for (size_t col = 0; col < e.result->ngens(); ++col) {
        Elem acc = n.zero();
        for (size_t i = 0; i < td; ++i)
            for (size_t j = 0; j < tb; ++j) {
                const Int& c = e.S.at(i * tb + j, col);
                if (c == 0)
                    continue;
                Elem amb(n.ngens(), Int(0));
                for (size_t r = 0; r < n.ngens(); ++r)
                    amb[r] = dd.embed.at(r, i);
                Elem term = n.scalar(ctx.B()->unit(j), n.reduce(std::move(amb)));
                for (size_t r = 0; r < n.ngens(); ++r)
                    acc[r] += c * term[r];
            }
        counit.images.push_back(n.reduce(std::move(acc)));
    }
    try {
        counit.check_linear();
    } catch (const Error&) {
        return false;
    }
    if (!counit.is_bijective())
        return false;
    // the identification must carry the extended action to sigma
    SemilinearModule se = extend(ctx, dd.module);
    for (int g = 0; g < ctx.action().group.order; ++g)
        for (size_t col = 0; col < e.result->ngens(); ++col) {
            Elem x(e.result->ngens(), Int(0));
            for (size_t r = 0; r < e.result->ngens(); ++r)
                x[r] = se.sigma[g].at(r, col);
            Elem lhs = counit.apply(e.result->reduce(std::move(x)));
            Elem img = counit.images[col];
            Elem rhs = n.reduce(s.sigma[g].apply(img));
            if (lhs != rhs)
                return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

std::vector<std::vector<Elem>> enumerate_ideals(const RingPtr& r) {
    // BFS over the ideal lattice, each ideal kept with a generating set
    auto elements = r->elements(1 << 12);
    auto closure = [&](const std::vector<Elem>& gens) {
        std::vector<Elem> set = {r->zero()};
        std::vector<Elem> frontier = {r->zero()};
        std::vector<Elem> seeds;
        for (const Elem& g : gens)
            for (const Elem& e : elements)
                seeds.push_back(r->mul(g, e));
        for (const Elem& s : seeds)
            if (std::find(set.begin(), set.end(), s) == set.end())
                set.push_back(s);
        bool grew = true;
        while (grew) {
            grew = false;
            size_t cur = set.size();
            for (size_t i = 0; i < cur; ++i)
                for (size_t j = 0; j < cur; ++j) {
                    Elem s = r->add(set[i], set[j]);
                    if (std::find(set.begin(), set.end(), s) == set.end()) {
                        set.push_back(s);
                        grew = true;
                    }
                }
        }
        std::sort(set.begin(), set.end());
        (void)frontier;
        return set;
    };

    std::vector<std::vector<Elem>> gens_list = {{}};
    std::vector<std::vector<Elem>> sets = {closure({})};
    for (size_t at = 0; at < gens_list.size(); ++at) {
        for (const Elem& x : elements) {
            if (std::binary_search(sets[at].begin(), sets[at].end(), x))
                continue;
            std::vector<Elem> g = gens_list[at];
            g.push_back(x);
            std::vector<Elem> s = closure(g);
            bool seen = false;
            for (const auto& t : sets)
                if (t == s) {
                    seen = true;
                    break;
                }
            if (!seen) {
                gens_list.push_back(std::move(g));
                sets.push_back(std::move(s));
            }
        }
    }
    return gens_list;
}

}  // namespace

std::vector<ModulePtr> module_classes(const RingPtr& r, long long size_bound) {
    std::vector<ModulePtr> cyclics;
    for (const auto& gens : enumerate_ideals(r)) {
        ModulePtr m = Module::cyclic(r, gens);
        if (m->size() > size_bound || m->size() == 1)
            continue;
        bool dup = false;
        for (const auto& c : cyclics)
            if (c->size() == m->size() && find_module_iso(c, m)) {
                dup = true;
                break;
            }
        if (!dup)
            cyclics.push_back(m);
    }
    std::sort(cyclics.begin(), cyclics.end(),
              [](const ModulePtr& a, const ModulePtr& b) { return a->size() < b->size(); });

    std::vector<ModulePtr> out = {Module::zero_module(r)};
    // multisets of cyclic summands with total size within the bound
    std::function<void(size_t, ModulePtr, Int)> rec = [&](size_t from, ModulePtr acc,
                                                          Int size) {
        for (size_t i = from; i < cyclics.size(); ++i) {
            Int next = size * cyclics[i]->size();
            if (next > size_bound)
                continue;
            ModulePtr sum = Module::direct_sum(acc, cyclics[i]);
            bool dup = false;
            for (const auto& c : out)
                if (c->size() == sum->size() && find_module_iso(c, sum)) {
                    dup = true;
                    break;
                }
            if (!dup)
                out.push_back(sum);
            rec(i, sum, next);
        }
    };
    rec(0, out[0], Int(1));
    std::sort(out.begin(), out.end(),
              [](const ModulePtr& a, const ModulePtr& b) { return a->size() < b->size(); });
    return out;
}

namespace {

/// N with the action twisted through g: r . x := g(r) x.
ModulePtr twisted_module(const Module& n, const RingMap& g) {
    auto tw = std::make_shared<Module>();
    tw->ring = n.ring;
    tw->orders = n.orders;
    const size_t t = n.ngens();
    for (size_t k = 0; k < n.ring->ngens(); ++k) {
        Mat a(t, t);
        const Elem img = g.images[k];
        for (size_t j = 0; j < t; ++j) {
            Elem col = n.scalar(img, n.unit(j));
            for (size_t i = 0; i < t; ++i)
                a.at(i, j) = col[i];
        }
        tw->action.push_back(std::move(a));
    }
    tw->check();
    return tw;
}

}  // namespace

std::vector<SemilinearModule> semilinear_structures(const GaloisContext& ctx,
                                                    const ModulePtr& n,
                                                    long long budget) {
    const Group& G = ctx.action().group;
    int gen = -1;
    for (int g = 0; g < G.order; ++g) {
        int pow = g, ord = 1;
        while (pow != G.id) {
            pow = G.op(pow, g);
            ++ord;
        }
        if (ord == G.order) {
            gen = g;
            break;
        }
    }
    if (gen < 0)
        throw InputError("semilinear_structures: enumeration supports cyclic groups");
    const Module& N = *n;
    const size_t t = N.ngens();
    std::vector<SemilinearModule> found;
    if (t == 0) {
        SemilinearModule s;
        s.module = n;
        for (int g = 0; g < G.order; ++g)
            s.sigma.push_back(Mat(0, 0));
        found.push_back(s);
        return found;
    }

    // a semilinear map is a linear isomorphism onto the twisted module, so
    // none exists unless the twist is isomorphic to N
    if (!find_module_iso(n, twisted_module(N, ctx.action().of(gen))))
        return found;

    // a small B-module generating set and B-coordinates for every element
    auto elems = N.elements(1 << 12);
    auto belems = ctx.B()->elements(1 << 12);
    std::vector<size_t> mgens;
    std::map<Elem, std::vector<Elem>> words;  // element -> B-coefficients on mgens
    words[N.zero()] = {};
    for (size_t i = 0; i < t; ++i) {
        if (words.count(N.unit(i)))
            continue;
        mgens.push_back(i);
        std::map<Elem, std::vector<Elem>> next = words;
        for (const auto& [e, w] : words)
            for (const Elem& b : belems) {
                Elem x = N.add(e, N.scalar(b, N.unit(i)));
                if (!next.count(x)) {
                    auto nw = w;
                    nw.resize(mgens.size() - 1, ctx.B()->zero());
                    nw.push_back(b);
                    next[x] = nw;
                }
            }
        words = std::move(next);
    }
    for (auto& [e, w] : words)
        w.resize(mgens.size(), ctx.B()->zero());

    const size_t d = mgens.size();
    auto act_gen = [&](const Elem& b) { return ctx.action().of(gen).apply(b); };

    // native-width tables for the hot search; coordinates stay below 2^12
    const size_t tb = ctx.B()->ngens();
    std::vector<long long> ord64(t);
    for (size_t i = 0; i < t; ++i)
        ord64[i] = static_cast<long long>(N.orders[i]);
    // action64[k][r][c]
    std::vector<std::vector<std::vector<long long>>> action64(tb);
    for (size_t k = 0; k < tb; ++k) {
        action64[k].assign(t, std::vector<long long>(t));
        for (size_t r = 0; r < t; ++r)
            for (size_t c = 0; c < t; ++c)
                action64[k][r][c] = static_cast<long long>(N.action[k].at(r, c));
    }
    using Vec64 = std::vector<long long>;
    auto to64 = [&](const Elem& e) {
        Vec64 v(e.size());
        for (size_t i = 0; i < e.size(); ++i)
            v[i] = static_cast<long long>(e[i]);
        return v;
    };
    auto scalar64 = [&](const Vec64& b, const Vec64& x) {
        Vec64 z(t, 0);
        for (size_t k = 0; k < tb; ++k) {
            if (b[k] == 0)
                continue;
            for (size_t c = 0; c < t; ++c) {
                if (x[c] == 0)
                    continue;
                long long f = b[k] * x[c];
                for (size_t r = 0; r < t; ++r)
                    z[r] += f % ord64[r] * action64[k][r][c];
            }
        }
        for (size_t r = 0; r < t; ++r)
            z[r] = ((z[r] % ord64[r]) + ord64[r]) % ord64[r];
        return z;
    };

    // per-element tables: additive order and the size of the B-span
    std::vector<Vec64> elems64;
    for (const Elem& e : elems)
        elems64.push_back(to64(e));
    std::vector<Vec64> belems64;
    for (const Elem& b : belems)
        belems64.push_back(to64(b));
    auto span_size = [&](const Vec64& x) {
        std::vector<Vec64> seen;
        for (const Vec64& b : belems64) {
            Vec64 y = scalar64(b, x);
            if (std::find(seen.begin(), seen.end(), y) == seen.end())
                seen.push_back(y);
        }
        return seen.size();
    };
    auto order64 = [&](const Vec64& x) {
        long long ord = 1;
        for (size_t i = 0; i < t; ++i) {
            if (x[i] == 0)
                continue;
            long long d2 = ord64[i] / std::gcd(x[i], ord64[i]);
            ord = ord / std::gcd(ord, d2) * d2;
        }
        return ord;
    };
    std::vector<std::vector<Vec64>> candidates(d);
    for (size_t i = 0; i < d; ++i) {
        Vec64 g = to64(N.unit(mgens[i]));
        long long want_order = order64(g);
        size_t want_span = span_size(g);
        for (const Vec64& x : elems64)
            if (order64(x) == want_order && span_size(x) == want_span)
                candidates[i].push_back(x);
    }

    // transformed words g0(w) per coordinate generator, fixed for the search
    std::vector<std::vector<Vec64>> wg(t);
    for (size_t j = 0; j < t; ++j) {
        const auto& w = words.at(N.unit(j));
        for (size_t i = 0; i < d; ++i)
            wg[j].push_back(to64(act_gen(w[i])));
    }
    // the twisted action of the ring generators, for the semilinearity check
    std::vector<std::vector<std::vector<long long>>> actg64(tb);
    for (size_t k = 0; k < tb; ++k) {
        actg64[k].assign(t, std::vector<long long>(t));
        Vec64 img = to64(act_gen(ctx.B()->unit(k)));
        for (size_t j = 0; j < t; ++j) {
            Vec64 col = scalar64(img, to64(N.unit(j)));
            for (size_t r = 0; r < t; ++r)
                actg64[k][r][j] = col[r];
        }
    }

    using Mat64 = std::vector<Vec64>;  // rows
    auto matmul = [&](const Mat64& a, const Mat64& b) {
        Mat64 c(t, Vec64(t, 0));
        for (size_t i = 0; i < t; ++i)
            for (size_t k = 0; k < t; ++k) {
                if (a[i][k] == 0)
                    continue;
                for (size_t j = 0; j < t; ++j)
                    c[i][j] += a[i][k] * b[k][j];
            }
        for (size_t i = 0; i < t; ++i)
            for (size_t j = 0; j < t; ++j)
                c[i][j] = ((c[i][j] % ord64[i]) + ord64[i]) % ord64[i];
        return c;
    };

    // per-level scalar maps b -> b . y_i, refreshed as images are chosen
    std::vector<Mat64> my(d, Mat64(t, Vec64(tb, 0)));
    std::vector<Vec64> images(d);
    long long steps = 0;

    auto accept = [&]() -> std::optional<Mat64> {
        Mat64 m(t, Vec64(t, 0));
        for (size_t j = 0; j < t; ++j)
            for (size_t i = 0; i < d; ++i)
                for (size_t k = 0; k < tb; ++k) {
                    if (wg[j][i][k] == 0)
                        continue;
                    for (size_t r = 0; r < t; ++r)
                        m[r][j] += wg[j][i][k] * my[i][r][k];
                }
        for (size_t r = 0; r < t; ++r)
            for (size_t j = 0; j < t; ++j)
                m[r][j] = ((m[r][j] % ord64[r]) + ord64[r]) % ord64[r];
        // well defined on the coordinate orders
        for (size_t j = 0; j < t; ++j)
            for (size_t r = 0; r < t; ++r)
                if (m[r][j] * ord64[j] % ord64[r] != 0)
                    return std::nullopt;
        // sigma^{|G|} = 1 (this also forces invertibility)
        Mat64 cur = m;
        for (int step = 1; step < G.order; ++step)
            cur = matmul(m, cur);
        for (size_t i = 0; i < t; ++i)
            for (size_t j = 0; j < t; ++j)
                if (cur[i][j] != (i == j ? 1 % ord64[i] : 0))
                    return std::nullopt;
        // semilinearity against every ring generator
        for (size_t k = 0; k < tb; ++k) {
            Mat64 actk(t, Vec64(t));
            for (size_t r = 0; r < t; ++r)
                for (size_t c = 0; c < t; ++c)
                    actk[r][c] = action64[k][r][c];
            Mat64 lhs = matmul(m, actk);
            Mat64 rhs = matmul(actg64[k], m);
            if (lhs != rhs)
                return std::nullopt;
        }
        return m;
    };

    std::function<void(size_t)> rec = [&](size_t at) {
        if (steps > budget)
            return;
        if (at == d) {
            auto m = accept();
            if (!m)
                return;
            SemilinearModule s;
            s.module = n;
            Mat mm(t, t);
            for (size_t r = 0; r < t; ++r)
                for (size_t c = 0; c < t; ++c)
                    mm.at(r, c) = (*m)[r][c];
            std::vector<Mat> pows(G.order, Mat::identity(t));
            Mat cur = Mat::identity(t);
            int g = G.id;
            for (int step = 0; step < G.order; ++step) {
                pows[g] = cur;
                cur = mm * cur;
                for (size_t r = 0; r < t; ++r)
                    for (size_t c2 = 0; c2 < t; ++c2) {
                        Int& v = cur.at(r, c2);
                        v %= N.orders[r];
                        if (v < 0)
                            v += N.orders[r];
                    }
                g = G.op(g, gen);
            }
            s.sigma = std::move(pows);
            found.push_back(std::move(s));
            return;
        }
        for (const Vec64& cand : candidates[at]) {
            ++steps;
            images[at] = cand;
            for (size_t k = 0; k < tb; ++k) {
                Vec64 b(tb, 0);
                b[k] = 1;
                Vec64 col = scalar64(b, cand);
                for (size_t r = 0; r < t; ++r)
                    my[at][r][k] = col[r];
            }
            rec(at + 1);
            if (steps > budget)
                return;
        }
    };
    rec(0);
    return found;
}

bool semilinear_isomorphic(const SemilinearModule& x, const SemilinearModule& y,
                           const GaloisContext& ctx) {
    const Group& G = ctx.action().group;
    // pick an element of maximal order for the commuting constraint
    int best = G.id, best_ord = 1;
    for (int g = 0; g < G.order; ++g) {
        int pow = g, ord = 1;
        while (pow != G.id) {
            pow = G.op(pow, g);
            ++ord;
        }
        if (ord > best_ord) {
            best_ord = ord;
            best = g;
        }
    }
    return find_module_iso(x.module, y.module, &x.sigma[best], &y.sigma[best]).has_value();
}

EquivalenceReport equivalence_report(const GaloisContext& ctx, long long size_bound,
                                     long long budget) {
    EquivalenceReport rep;
    if (!ctx.galois()) {
        rep.notes.push_back("extension is not Galois: refusing to enumerate");
        return rep;
    }
    std::vector<ModulePtr> aclasses = module_classes(ctx.A(), size_bound);
    rep.a_classes = static_cast<int>(aclasses.size());

    // Extension multiplies sizes, so the bijection pairs the semilinear
    // classes within the bound with the A-classes whose extension stays within
    // it. Every enumerated structure must satisfy the counit identity
    // extend(descend(N)) = N; classes are then faithfully indexed by their
    // descended A-class, which handles the deduplication as well.
    bool ok = true;
    std::vector<int> a_hit(aclasses.size(), 0);
    std::vector<ModulePtr> bclasses = module_classes(ctx.B(), size_bound);
    for (const auto& b : bclasses) {
        auto sigmas = semilinear_structures(ctx, b, budget);
        for (const auto& s : sigmas) {
            if (!counit_is_iso(ctx, s)) {
                ok = false;
                rep.notes.push_back("extend(descend(N)) != N for a structure on size " +
                                    s.module->size().str());
                continue;
            }
            Descended dd = descend(ctx, s);
            int match = -1;
            for (size_t i = 0; i < aclasses.size(); ++i)
                if (dd.module->size() == aclasses[i]->size() &&
                    find_module_iso(dd.module, aclasses[i])) {
                    match = static_cast<int>(i);
                    break;
                }
            if (match < 0) {
                ok = false;
                rep.notes.push_back("descended class missing from the A-side enumeration");
            } else if (a_hit[match]++ == 0) {
                ++rep.semilinear_classes;
            }
        }
    }
    rep.complete = true;

    for (size_t i = 0; i < aclasses.size(); ++i) {
        SemilinearModule e = extend(ctx, aclasses[i]);
        bool in_range = e.module->size() <= size_bound;
        if ((a_hit[i] > 0) != in_range) {
            ok = false;
            rep.notes.push_back("A-class of size " + aclasses[i]->size().str() +
                                " matched " + std::to_string(a_hit[i]) +
                                " semilinear structures");
            continue;
        }
        if (in_range && !unit_is_iso(ctx, aclasses[i])) {
            ok = false;
            rep.notes.push_back("descend(extend(M)) != M for a class of size " +
                                aclasses[i]->size().str());
        }
    }
    rep.bijective = ok;
    return rep;
}

}  // namespace ro2::descent
