#include "ro2alg/jw.hpp"

#include "ro2alg/errors.hpp"

namespace ro2 {

namespace {
Int pow2(long long e) {
    Int r = 1;
    r <<= static_cast<unsigned>(e);
    return r;
}
}  // namespace

FibrationProfile profile(int n) {
    if (n < 1)
        throw InputError("profile: n must be >= 1");
    FibrationProfile p;
    p.n = n;
    p.lambda = pow2(2 * n + 1) - pow2(n + 2) + 1;
    p.nilpotency = pow2(n + 1) - 1;
    p.period = 2 * (pow2(n) - 1);
    return p;
}

bool periodicity_check(int n) {
    FibrationProfile p = profile(n);
    Int lhs = 2 * (pow2(n) - 1) * (pow2(n) - 1);
    return lhs == p.lambda + 1;
}

Monomial y_class(int n, const PresRing& ring) {
    if (n < 1)
        throw InputError("y_class: n must be >= 1");
    if (ring.kind() != RingKind::en || ring.n() != n)
        throw InputError("y_class: ring must be the periodic presentation at n = " +
                         std::to_string(n));
    Monomial y;
    y.uexp[n] = (1LL << n) - 1;
    y.sigma = -(1LL << (n + 1)) * ((1LL << (n - 1)) - 1);
    Element nf = ring.normal_form(y);  // window check
    if (nf.size() != 1)
        throw WindowError("y_class: class does not survive in this window");
    return y;
}

Monomial x_class(int n, const PresRing& ring) {
    Monomial x = y_class(n, ring);
    x.aexp = 1;
    return x;
}

PresRing en_ring_for(int n, RingOptions opts) {
    long long nil = (1LL << (n + 1)) - 1;
    long long span = (1LL << (n + 1)) * ((1LL << std::max(n - 1, 0)) - 1) * nil + (1LL << (n + 1));
    span = std::max(span, 1LL << (n + 1));
    return PresRing::en(n, -span, span, nil + 1, GenSequence::identity(n), std::move(opts));
}

bool tate_trivial_check(const PresRing& ring) {
    return ring.localize_a().collapsed;
}

bool tate_trivial_check(int n) { return tate_trivial_check(en_ring_for(n)); }

std::vector<InvariantRow> invariant_table(int n_max) {
    if (n_max < 1)
        throw InputError("invariant_table: n_max must be >= 1");
    std::vector<InvariantRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        FibrationProfile p = profile(n);
        rows.push_back({n, p.lambda, p.nilpotency, p.period, periodicity_check(n)});
    }
    return rows;
}

}  // namespace ro2
