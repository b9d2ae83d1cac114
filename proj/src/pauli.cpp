#include "qdstab/pauli.h"

#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qds {

namespace {

int mod(long long v, int d) {
    long long m = v % d;
    return static_cast<int>(m < 0 ? m + d : m);
}

}  // namespace

std::string to_string(const EdgeId& e) {
    std::ostringstream os;
    os << "e(" << e.c << "," << e.r << "," << e.kind;
    if (e.layer != 0) os << "," << static_cast<int>(e.layer);
    os << ")";
    return os.str();
}

std::optional<EdgeId> parse_edge(const std::string& s) {
    if (s.size() < 8 || s.substr(0, 2) != "e(" || s.back() != ')') return std::nullopt;
    std::string body = s.substr(2, s.size() - 3);
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : body) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3 && parts.size() != 4) return std::nullopt;
    EdgeId e;
    try {
        e.c = static_cast<int16_t>(std::stoi(parts[0]));
        e.r = static_cast<int16_t>(std::stoi(parts[1]));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (parts[2] != "H" && parts[2] != "V") return std::nullopt;
    e.kind = parts[2][0];
    if (parts.size() == 4) {
        try {
            e.layer = static_cast<int8_t>(std::stoi(parts[3]));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    return e;
}

PauliOp& PauliOp::mul_site(EdgeId e, int x, int z) {
    x = mod(x, d);
    z = mod(z, d);
    if (x == 0 && z == 0) return *this;
    auto it = sites.find(e);
    if (it == sites.end()) {
        sites[e] = XZ{x, z};
        return *this;
    }
    // X^x0 Z^z0 * X^x Z^z = w^{z0 x} X^{x0+x} Z^{z0+z}
    phase = mod(phase + static_cast<long long>(it->second.z) * x, d);
    it->second.x = mod(it->second.x + x, d);
    it->second.z = mod(it->second.z + z, d);
    if (it->second.x == 0 && it->second.z == 0) sites.erase(it);
    return *this;
}

XZ PauliOp::at(EdgeId e) const {
    auto it = sites.find(e);
    return it == sites.end() ? XZ{} : it->second;
}

PauliOp multiply(const PauliOp& p, const PauliOp& q) {
    if (p.d != q.d) throw std::invalid_argument("multiply: mismatched qudit dimension");
    PauliOp out = p;
    out.phase = mod(out.phase + q.phase, p.d);
    for (const auto& [e, f] : q.sites) out.mul_site(e, f.x, f.z);
    return out;
}

PauliOp inverse(const PauliOp& p) {
    // (X^x Z^z)^-1 = Z^-z X^-x = w^{xz} X^-x Z^-z per site.
    PauliOp out;
    out.d = p.d;
    long long ph = -p.phase;
    for (const auto& [e, f] : p.sites) {
        ph += static_cast<long long>(f.x) * f.z;
        out.sites[e] = XZ{mod(-f.x, p.d), mod(-f.z, p.d)};
    }
    out.phase = mod(ph, p.d);
    return out;
}

PauliOp pauli_power(const PauliOp& p, long long t) {
    // p^t = w^{t phi + C(t,2) sum_e x_e z_e} X^{t x} Z^{t z}
    long long tm = ((t % p.d) + p.d) % p.d;
    long long carry = 0;
    for (const auto& [e, f] : p.sites) carry += static_cast<long long>(f.x) * f.z;
    // C(t,2) reduced mod d needs the true integer t(t-1)/2; use tm plus the
    // parity of the omitted multiples of d, all of which are 0 mod d after
    // multiplying by carry only when d is odd.  Work with t directly instead.
    long long half = (t % (2LL * p.d) + 2LL * p.d) % (2LL * p.d);
    long long c2 = half * (half - 1) / 2;  // congruent to t(t-1)/2 mod d
    PauliOp out;
    out.d = p.d;
    out.phase = mod(tm * p.phase + c2 * carry, p.d);
    for (const auto& [e, f] : p.sites) {
        int x = mod(tm * f.x, p.d);
        int z = mod(tm * f.z, p.d);
        if (x || z) out.sites[e] = XZ{x, z};
    }
    return out;
}

long long symplectic_product(const PauliOp& p, const PauliOp& q) {
    if (p.d != q.d) throw std::invalid_argument("symplectic_product: mismatched dimension");
    long long s = 0;
    for (const auto& [e, f] : p.sites) {
        XZ g = q.at(e);
        s += static_cast<long long>(f.z) * g.x - static_cast<long long>(f.x) * g.z;
    }
    return mod(s, p.d);
}

bool commute(const PauliOp& p, const PauliOp& q) { return symplectic_product(p, q) == 0; }

long long operator_order(const PauliOp& p) {
    long long n0 = 1;
    for (const auto& [e, f] : p.sites) {
        int g = std::gcd(p.d, std::gcd(f.x, f.z));
        n0 = std::lcm(n0, static_cast<long long>(p.d / g));
    }
    PauliOp r = pauli_power(p, n0);
    if (!r.sites.empty()) throw std::logic_error("operator_order: power did not vanish");
    return n0 * (p.d / std::gcd(static_cast<long long>(p.d), static_cast<long long>(r.phase)));
}

std::string to_string(const PauliOp& p) {
    std::ostringstream os;
    bool first = true;
    if (p.phase != 0) {
        os << "w^" << p.phase;
        first = false;
    }
    for (const auto& [e, f] : p.sites) {
        if (!first) os << " ";
        first = false;
        if (f.x) os << "X" << f.x;
        if (f.z) os << "Z" << f.z;
        os << "@" << to_string(e);
    }
    if (first) os << "I";
    return os.str();
}

std::optional<PauliOp> parse_pauli(const std::string& s, int d) {
    PauliOp out;
    out.d = d;
    std::istringstream is(s);
    std::string tok;
    bool any = false;
    while (is >> tok) {
        if (tok == "I") {
            any = true;
            continue;
        }
        if (tok[0] == 'w') {
            long long k = 1;
            if (tok.size() > 1) {
                if (tok[1] != '^') return std::nullopt;
                try {
                    k = std::stoll(tok.substr(2));
                } catch (const std::exception&) {
                    return std::nullopt;
                }
            }
            out.phase = mod(out.phase + k, d);
            any = true;
            continue;
        }
        auto at = tok.find('@');
        if (at == std::string::npos) return std::nullopt;
        std::string fac = tok.substr(0, at);
        auto edge = parse_edge(tok.substr(at + 1));
        if (!edge) return std::nullopt;
        long long x = 0, z = 0;
        size_t i = 0;
        while (i < fac.size()) {
            char c = fac[i];
            if (c != 'X' && c != 'Z') return std::nullopt;
            size_t j = i + 1;
            while (j < fac.size() && (std::isdigit(fac[j]) || fac[j] == '-')) j++;
            if (j == i + 1) return std::nullopt;
            long long v;
            try {
                v = std::stoll(fac.substr(i + 1, j - i - 1));
            } catch (const std::exception&) {
                return std::nullopt;
            }
            (c == 'X' ? x : z) += v;
            i = j;
        }
        out.mul_site(*edge, mod(x, d), mod(z, d));
        any = true;
    }
    if (!any) return std::nullopt;
    return out;
}

}  // namespace qds
