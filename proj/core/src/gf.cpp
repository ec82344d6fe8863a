#include "nswm/gf.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace nswm {

namespace {

// Carry-less polynomial multiplication reduced by `poly`.
unsigned poly_mul(unsigned a, unsigned b, unsigned poly, int degree) {
    unsigned acc = 0;
    while (b != 0) {
        if (b & 1u) {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a & (1u << degree)) {
            a ^= poly;
        }
    }
    return acc;
}

}  // namespace

FieldTable::FieldTable(int order, unsigned poly) : q_(order), poly_(poly) {
    if (order != 4 && order != 8 && order != 16) {
        throw std::invalid_argument("field order must be 4, 8 or 16, got " + std::to_string(order));
    }
    const int degree = std::bit_width(static_cast<unsigned>(order)) - 1;
    if (poly >> degree != 1u || poly >= static_cast<unsigned>(2 * order)) {
        throw std::invalid_argument("reduction polynomial degree does not match field order");
    }

    // A reducible polynomial yields zero divisors; detect them directly.
    for (unsigned a = 1; a < static_cast<unsigned>(order); ++a) {
        for (unsigned b = a; b < static_cast<unsigned>(order); ++b) {
            if (poly_mul(a, b, poly, degree) == 0) {
                throw std::invalid_argument("reduction polynomial is reducible");
            }
        }
    }

    // Find a generator of the multiplicative group and fill exp/log.
    const int group = order - 1;
    log_.assign(order, -1);
    exp_.assign(2 * group, 0);
    for (unsigned g = 2; g < static_cast<unsigned>(order); ++g) {
        unsigned v = 1;
        int i = 0;
        for (; i < group; ++i) {
            if (v == 1 && i > 0) {
                break;
            }
            v = poly_mul(v, g, poly, degree);
        }
        if (i == group && v == 1) {
            v = 1;
            for (int j = 0; j < group; ++j) {
                exp_[j] = static_cast<uint8_t>(v);
                exp_[j + group] = static_cast<uint8_t>(v);
                log_[v] = j;
                v = poly_mul(v, g, poly, degree);
            }
            return;
        }
    }
    throw std::invalid_argument("no generator found (polynomial not primitive over this order)");
}

FieldTable FieldTable::with_default_poly(int order) {
    switch (order) {
        case 4:
            return FieldTable(4, 0b111);
        case 8:
            return FieldTable(8, 0b1011);
        case 16:
            return FieldTable(16, 0b10011);
        default:
            throw std::invalid_argument("field order must be 4, 8 or 16, got " + std::to_string(order));
    }
}

uint8_t FieldTable::inv(uint8_t a) const {
    if (a == 0) {
        throw std::domain_error("inverse of 0 is undefined");
    }
    return exp_[(q_ - 1) - log_[a]];
}

}  // namespace nswm
