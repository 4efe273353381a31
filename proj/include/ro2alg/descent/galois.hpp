#pragma once

#include "ro2alg/descent/module.hpp"

namespace ro2::descent {

/// A group acting on a module N over B by additive maps with
/// sigma_g(x.n) = g(x).sigma_g(n) and sigma_{gh} = sigma_g sigma_h.
struct SemilinearModule {
    ModulePtr module;        // over B
    std::vector<Mat> sigma;  // one matrix per group element

    void check(const GroupAction& act) const;
};

/// The Galois verdict for f : A -> B with the action of G, with the inverse of
/// h as witness on success.
struct GaloisReport {
    bool fixed_ring_iso = false;  // i : A = B^G
    bool h_iso = false;           // h : B (x)_A B = prod_G B
    bool galois() const { return fixed_ring_iso && h_iso; }
    Int fixed_ring_size = 0;
    Mat h_matrix;   // prod coords x tensor coords
    Mat h_inverse;  // witness when h is bijective
    std::string diagnostics;
};

/// Working context around one extension: the tensor square, its comparison
/// with prod_G B, and the component projections pi_g(x (x) y) = x g(y).
class GaloisContext {
  public:
    GaloisContext(RingMap f, GroupAction act);

    const RingMap& f() const { return f_; }
    const GroupAction& action() const { return act_; }
    const RingPtr& A() const { return f_.src; }
    const RingPtr& B() const { return f_.dst; }
    const TensorRing& tensor() const { return tens_; }
    const GaloisReport& report() const { return report_; }
    bool galois() const { return report_.galois(); }

    /// pi_g : T -> B, pi_g(x (x) y) = x g(y).
    const RingMap& pi(int g) const { return pi_[g]; }

  private:
    RingMap f_;
    GroupAction act_;
    TensorRing tens_;
    std::vector<RingMap> pi_;
    GaloisReport report_;
};

GaloisReport is_galois(const RingMap& f, const GroupAction& act);

/// phi : N (x)_{phi1} T -> N (x)_{phi2} T over T = B (x)_A B with the cocycle
/// condition over the triple tensor square.
struct DescentDatum {
    ModulePtr module;  // N over B
    BaseChange side1;  // N (x)_{phi1} T
    BaseChange side2;  // N (x)_{phi2} T
    ModuleMap phi;
};

/// The datum carried by an extended module M (x)_A B.
DescentDatum canonical_datum(const GaloisContext& ctx, const ModulePtr& m_over_a);

/// Exhaustive check of phi13* phi = phi23* phi o phi12* phi.
bool check_cocycle(const GaloisContext& ctx, const DescentDatum& d);

SemilinearModule datum_to_action(const GaloisContext& ctx, const DescentDatum& d);
DescentDatum action_to_datum(const GaloisContext& ctx, const SemilinearModule& s);

/// M (x)_A B with the action id (x) g.
SemilinearModule extend(const GaloisContext& ctx, const ModulePtr& m_over_a);

/// Fixed points N^G as an A-module, with the inclusion into N.
struct Descended {
    ModulePtr module;  // over A
    Mat embed;         // N coords x module gens
};
Descended descend(const GaloisContext& ctx, const SemilinearModule& s);

/// descend(extend(M)) = M through m -> m (x) 1.
bool unit_is_iso(const GaloisContext& ctx, const ModulePtr& m_over_a);
/// extend(descend(N)) = N through n (x) b -> b n.
bool counit_is_iso(const GaloisContext& ctx, const SemilinearModule& s);

struct EquivalenceReport {
    bool complete = false;      // enumeration finished within the caps
    bool bijective = false;     // extend/descend matches the classes
    int a_classes = 0;
    int semilinear_classes = 0;
    std::vector<std::string> notes;
};

/// Enumerate A-module classes and semilinear (G, B)-module classes up to
/// size_bound and match them through extend/descend. Modules are generated as
/// direct sums of cyclic modules B/I (every module decomposes this way over
/// the finite chain/product rings of the corpus).
EquivalenceReport equivalence_report(const GaloisContext& ctx, long long size_bound,
                                     long long budget = 50000000);

/// Isomorphism classes of modules of size at most bound, as direct sums of
/// cyclic modules.
std::vector<ModulePtr> module_classes(const RingPtr& r, long long size_bound);

/// All semilinear structures on a module for a cyclic group action, one
/// matrix for the chosen generator of G; returns the full sigma families.
std::vector<SemilinearModule> semilinear_structures(const GaloisContext& ctx,
                                                    const ModulePtr& n,
                                                    long long budget = 5000000);

bool semilinear_isomorphic(const SemilinearModule& x, const SemilinearModule& y,
                           const GaloisContext& ctx);

}  // namespace ro2::descent
