#pragma once

#include <cstdint>
#include <vector>

namespace nswm {

// Arithmetic over GF(2^p) for p in {2,3,4}. Elements are small unsigned
// integers whose bit patterns are the polynomial coefficients, so addition
// is bitwise XOR and every element is its own additive inverse.
class FieldTable {
public:
    // Builds exp/log tables for the field of the given order, reducing by
    // `poly` (bit pattern, e.g. x^4+x+1 = 0b10011). Throws std::invalid_argument
    // for unsupported orders or a reducible polynomial.
    FieldTable(int order, unsigned poly);

    // Conventional primitive polynomials: x^2+x+1, x^3+x+1, x^4+x+1.
    static FieldTable with_default_poly(int order);

    int order() const { return q_; }
    unsigned poly() const { return poly_; }

    uint8_t add(uint8_t a, uint8_t b) const { return a ^ b; }
    uint8_t sub(uint8_t a, uint8_t b) const { return a ^ b; }

    uint8_t mul(uint8_t a, uint8_t b) const {
        if (a == 0 || b == 0) {
            return 0;
        }
        return exp_[log_[a] + log_[b]];
    }

    // Multiplicative inverse; inv(0) throws std::domain_error.
    uint8_t inv(uint8_t a) const;

    uint8_t div(uint8_t a, uint8_t b) const { return mul(a, inv(b)); }

private:
    int q_;
    unsigned poly_;
    std::vector<uint8_t> exp_;  // exp_[i] = g^i for i in [0, 2(q-1)), doubled to skip the mod
    std::vector<int> log_;      // log_[a] for a != 0
};

}  // namespace nswm
