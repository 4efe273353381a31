#pragma once

#include <vector>

#include "ro2alg/presring.hpp"

namespace ro2 {

/// Integer data of the fibration Sigma^{lambda(n)} XR -> XR -> X.
struct FibrationProfile {
    int n = 1;
    Int lambda;      // 2^{2n+1} - 2^{n+2} + 1
    Int nilpotency;  // 2^{n+1} - 1
    Int period;      // 2(2^n - 1), the periodicity |v_n| of X
};

FibrationProfile profile(int n);

/// Exact check of 2(2^n - 1)^2 == lambda(n) + 1.
bool periodicity_check(int n);

/// y(n) = u_n^{2^n - 1} sigma^{-2^{n+1}(2^{n-1} - 1)}; invertible of degree
/// (lambda(n), 1) in the periodic presentation.
Monomial y_class(int n, const PresRing& ring);

/// x(n) = a * y(n), nilpotent of degree (lambda(n), 0).
Monomial x_class(int n, const PresRing& ring);

/// Periodic-style presentation with a window large enough for y(n), x(n) and
/// the powers of x(n) up to the nilpotency order.
PresRing en_ring_for(int n, RingOptions opts = {});

/// Inverting a in the periodic presentation collapses it to the zero ring.
bool tate_trivial_check(int n);
bool tate_trivial_check(const PresRing& ring);

struct InvariantRow {
    int n;
    Int lambda, nilpotency, period;
    bool periodicity;
};

std::vector<InvariantRow> invariant_table(int n_max);

}  // namespace ro2
