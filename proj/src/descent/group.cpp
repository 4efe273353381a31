#include "ro2alg/descent/base.hpp"

#include "ro2alg/errors.hpp"

namespace ro2::descent {

Group Group::cyclic(int k) {
    if (k < 1)
        throw InputError("Group: order must be positive");
    Group g;
    g.order = k;
    g.id = 0;
    g.table.resize(k * k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            g.table[a * k + b] = (a + b) % k;
    return g;
}

int Group::inverse(int a) const {
    for (int b = 0; b < order; ++b)
        if (op(a, b) == id)
            return b;
    throw InputError("Group: element without inverse");
}

void Group::check() const {
    if (static_cast<int>(table.size()) != order * order)
        throw InputError("Group: bad table size");
    for (int a = 0; a < order; ++a) {
        if (op(id, a) != a || op(a, id) != a)
            throw InputError("Group: identity fails");
        inverse(a);
        for (int b = 0; b < order; ++b)
            for (int c = 0; c < order; ++c)
                if (op(op(a, b), c) != op(a, op(b, c)))
                    throw InputError("Group: associativity fails");
    }
}

}  // namespace ro2::descent
