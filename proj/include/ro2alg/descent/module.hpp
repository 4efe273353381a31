#pragma once

#include <optional>

#include "ro2alg/descent/base.hpp"

namespace ro2::descent {

class Module;
using ModulePtr = std::shared_ptr<const Module>;

/// A finite module over a presented ring: an abelian coordinate group with one
/// action matrix per ring coordinate generator (the action of a general ring
/// element is the matching linear combination).
class Module {
  public:
    RingPtr ring;
    std::vector<Int> orders;
    std::vector<Mat> action;  // [ring gen] : t x t

    size_t ngens() const { return orders.size(); }
    Int size() const;
    Elem zero() const { return Elem(ngens(), Int(0)); }
    Elem reduce(Elem x) const;
    Elem add(const Elem& x, const Elem& y) const;
    Elem sub(const Elem& x, const Elem& y) const;
    Elem unit(size_t i) const;
    Elem scalar(const Elem& r, const Elem& m) const;
    bool is_zero(const Elem& x) const;
    std::vector<Elem> elements(long long cap = 1 << 20) const;
    Int elem_order(const Elem& x) const;  // additive order

    void check() const;

    static ModulePtr free_module(const RingPtr& r, int rank);
    /// The ring as a module over itself twisted by a ring endomorphism:
    /// r . x = f(r) x.
    static ModulePtr restriction(const RingPtr& r, const RingMap& f);
    static ModulePtr zero_module(const RingPtr& r);
    /// Direct sum.
    static ModulePtr direct_sum(const ModulePtr& a, const ModulePtr& b);
    /// Quotient of the ring by an ideal, as a module.
    static ModulePtr cyclic(const RingPtr& r, const std::vector<Elem>& ideal_gens);
};

/// Additive map between modules on generators.
struct ModuleMap {
    ModulePtr src;
    ModulePtr dst;
    std::vector<Elem> images;

    Elem apply(const Elem& x) const;
    void check_additive() const;
    /// R-linearity over a common ring.
    void check_linear() const;
    bool is_bijective() const;
    ModuleMap after(const ModuleMap& first) const;
    bool same_map(const ModuleMap& o) const;
};

/// M (x)_R N presented on the images of the pure tensors, with projection P
/// from the pair coordinates (i, j) -> i * ngens(N) + j and a section S.
struct Tensor {
    ModulePtr result;
    Mat P;  // result coords x pair coords
    Mat S;  // pair coords x result coords

    Elem pure(const Module& m, const Module& n, const Elem& x, const Elem& y) const;
};

/// Tensor over the common base ring of M and N (their ring pointers must
/// agree); the result carries the R-action through the left factor.
Tensor tensor_modules(const Module& m, const Module& n);

/// Base change along f : R -> S. The result is an S-module together with the
/// pure-tensor map; the canonical map is x -> pure(x, 1).
struct BaseChange {
    ModulePtr result;  // over f.dst
    Mat P, S;
    ModulePtr m;       // the original module (over f.src)
    RingMap f;

    Elem pure(const Elem& x, const Elem& s) const;
    Elem canonical(const Elem& x) const { return pure(x, f.dst->one); }
};

BaseChange base_change(const ModulePtr& m, const RingMap& f);

/// B (x)_A B' as a ring, for two A-algebras given by structure maps; also
/// keeps the two inclusions b -> b (x) 1 and b' -> 1 (x) b'.
struct TensorRing {
    RingPtr result;
    Mat P, S;
    RingMap f1;  // left factor inclusion
    RingMap f2;  // right factor inclusion
    RingMap unit;  // A -> result

    Elem pure(const Ring& b1, const Ring& b2, const Elem& x, const Elem& y) const;
};

TensorRing tensor_ring(const RingMap& a_to_b1, const RingMap& a_to_b2);

/// Presentation of (sublattice K / coordinate orders) as a module, with maps
/// in and out of the ambient coordinates.
struct Subquotient {
    std::vector<Int> orders;
    Mat embed;      // ambient x sub
    Mat sub_basis;  // K basis used for solving
    Mat restrictU;  // sub coords from K coords
    // reduction of an ambient element known to lie in K
    Elem restrict_elem(const Elem& ambient) const;
};

Subquotient subquotient(const Mat& k_basis, const std::vector<Int>& ambient_orders);

/// Search for an R-linear isomorphism (optionally commuting with paired
/// semilinear generators sigma_src, sigma_dst). Returns the generator images.
std::optional<ModuleMap> find_module_iso(const ModulePtr& a, const ModulePtr& b,
                                         const Mat* sigma_a = nullptr,
                                         const Mat* sigma_b = nullptr,
                                         long long budget = 4000000);

}  // namespace ro2::descent
