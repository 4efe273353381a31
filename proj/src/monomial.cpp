#include "ro2alg/monomial.hpp"

#include <sstream>

namespace ro2 {

Monomial::Key Monomial::key() const {
    std::vector<std::pair<int, long long>> u(uexp.begin(), uexp.end());
    return {std::move(u), uinv, sigma, aexp};
}

bool operator<(const Monomial& a, const Monomial& b) { return a.key() < b.key(); }

std::string Monomial::str() const {
    std::vector<std::string> parts;
    if (!coeff.is_one())
        parts.push_back(coeff.str());
    for (const auto& [k, e] : uexp) {
        std::string p = "u" + std::to_string(k);
        if (e != 1)
            p += "^" + std::to_string(e);
        parts.push_back(p);
    }
    if (uinv != 0)
        parts.push_back("un^-" + std::to_string(uinv));
    if (sigma != 0)
        parts.push_back("s^" + std::to_string(sigma));
    if (aexp != 0)
        parts.push_back(aexp == 1 ? "a" : "a^" + std::to_string(aexp));
    if (parts.empty())
        return "1";
    std::string s = parts[0];
    for (size_t i = 1; i < parts.size(); ++i)
        s += "*" + parts[i];
    return s;
}

std::string element_str(const Element& e) {
    if (e.empty())
        return "0";
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) {
        if (i)
            s += " + ";
        s += e[i].str();
    }
    return s;
}

}  // namespace ro2
