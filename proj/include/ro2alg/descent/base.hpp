#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ro2alg/smith.hpp"

namespace ro2::descent {

/// Coordinates of an element in a presented finite abelian group:
/// one residue per generator, reduced modulo that generator's order.
using Elem = std::vector<Int>;

/// A finite group given by its multiplication table.
struct Group {
    int order = 1;
    std::vector<int> table;  // table[a * order + b]
    int id = 0;

    static Group cyclic(int k);
    int op(int a, int b) const { return table[a * order + b]; }
    int inverse(int a) const;
    void check() const;
};

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

/// A finite commutative ring presented on additive coordinate generators
/// Z/d_1 x ... x Z/d_t with a bilinear multiplication table. Small rings can
/// enumerate their elements; derived rings (tensor powers, function rings) may
/// only be handled through coordinates.
class Ring {
  public:
    std::vector<Int> orders;                   // d_i >= 1
    std::vector<std::vector<Elem>> mul_table;  // [i][j] = coords of e_i e_j
    Elem one;
    std::string name;

    size_t ngens() const { return orders.size(); }
    Int size() const;
    Elem zero() const { return Elem(ngens(), Int(0)); }
    Elem reduce(Elem x) const;
    Elem add(const Elem& x, const Elem& y) const;
    Elem sub(const Elem& x, const Elem& y) const;
    Elem neg(const Elem& x) const;
    Elem mul(const Elem& x, const Elem& y) const;
    bool is_zero(const Elem& x) const;
    Elem unit(size_t i) const;  // coordinate generator e_i

    /// All elements, mixed-radix order. Throws when size() exceeds cap.
    std::vector<Elem> elements(long long cap = 1 << 20) const;

    /// Commutative unital ring axioms, checked on the coordinate generators
    /// (bilinearity extends them to all elements).
    void check() const;

    static RingPtr zmod(long long n);
    /// F_p[x]/(f); f monic with coefficient list low-to-high, f need not be
    /// irreducible (x^2 gives the dual numbers).
    static RingPtr polyquot(long long p, const std::vector<long long>& f,
                            const std::string& var = "x");
    static RingPtr product(const std::vector<RingPtr>& factors);
    static RingPtr quotient(const RingPtr& base, const std::vector<Elem>& ideal_gens);
};

/// An additive map between rings described on coordinate generators;
/// check() verifies it is a unital ring homomorphism.
struct RingMap {
    RingPtr src;
    RingPtr dst;
    std::vector<Elem> images;  // one per src generator

    Elem apply(const Elem& x) const;
    void check() const;
    bool is_bijective() const;
    static RingMap identity(const RingPtr& r);
    RingMap after(const RingMap& first) const;  // this ∘ first
    bool same_map(const RingMap& o) const;
};

/// A finite group acting on B by ring automorphisms.
struct GroupAction {
    Group group;
    RingPtr ring;
    std::vector<RingMap> maps;  // indexed by group element

    const RingMap& of(int g) const { return maps[g]; }
    void check() const;
};

/// Index of the coordinate lattice of the given orders inside Z^n (the group
/// order), and helpers for describing sublattices.
Int lattice_index(const Mat& basis);

/// Basis (columns) of { x : M x lies in the lattice spanned by diag(orders) }.
Mat preimage_lattice(const Mat& m, const std::vector<Int>& orders);

/// Diagonal-orders lattice as a matrix.
Mat orders_lattice(const std::vector<Int>& orders);

/// Number of x in Z^n / orders with M x = 0 in Z^m / orders_dst; injectivity
/// of the induced map is count == 1.
Int kernel_size(const Mat& m, const std::vector<Int>& orders_src,
                const std::vector<Int>& orders_dst);

}  // namespace ro2::descent
