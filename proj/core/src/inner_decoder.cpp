#include "nswm/inner_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nswm {

DriftWindow DriftWindow::for_span(int modeled_len, const IdsParams& params, int u) {
    const double indel = params.p_ins + params.p_del;
    const double sigma = std::sqrt(std::max(0.0, static_cast<double>(modeled_len) * indel));
    const int x = std::max(6, static_cast<int>(std::ceil(4.0 * sigma)) + 2);
    DriftWindow w;
    w.x_max = x;
    w.x_min = -x;
    w.d_min = std::max(-u, w.x_min - w.x_max);
    w.d_max = std::min(u * std::max(params.max_insertions, 0), w.x_max - w.x_min);
    return w;
}

DriftDistribution DriftDistribution::point(const DriftWindow& window, int drift) {
    if (drift < window.x_min || drift > window.x_max) {
        throw std::invalid_argument("point drift outside the window");
    }
    DriftDistribution d;
    d.lo = window.x_min;
    d.weights.assign(window.width(), 0.0);
    d.weights[drift - window.x_min] = 1.0;
    return d;
}

DriftDistribution DriftDistribution::uniform(const DriftWindow& window) {
    DriftDistribution d;
    d.lo = window.x_min;
    d.weights.assign(window.width(), 1.0 / window.width());
    return d;
}

bool DriftDistribution::normalize() {
    double sum = 0.0;
    for (double w : weights) {
        sum += w;
    }
    if (sum <= 0.0) {
        return false;
    }
    for (double& w : weights) {
        w /= sum;
    }
    log_scale += std::log(sum);
    return true;
}

bool DriftDistribution::is_zero() const {
    for (double w : weights) {
        if (w > 0.0) {
            return false;
        }
    }
    return true;
}

double DriftDistribution::at(int drift) const {
    const int idx = drift - lo;
    if (idx < 0 || idx >= static_cast<int>(weights.size())) {
        return 0.0;
    }
    return weights[idx];
}

void drift_forward_step(const EmissionTable& emissions, std::span<const uint8_t> read, int pos, uint8_t t,
                        int x_lo, std::span<const double> in, std::span<double> out) {
    const int width = static_cast<int>(out.size());
    const int len = static_cast<int>(read.size());
    const int cap = emissions.max_run();
    const double del = emissions.del();
    const double* in_p = in.data();
    for (int i = 0; i < width; ++i) {
        // Deletion: predecessor drift + 1, consumes nothing.
        double acc = i + 1 < width ? in_p[i + 1] * del : 0.0;
        // The span for any mu >= 1 ends at read[pos + drift], so the
        // emission row depends only on the output index.
        const int last_pos = pos + x_lo + i;
        if (last_pos >= 0 && last_pos < len) {
            const double* row = emissions.row_for(read[last_pos], t);
            // Predecessor index i - mu + 1 must stay in the window and the
            // span start pos + x_lo + (i - mu + 1) must stay in the read.
            int mu_hi = std::min(cap, i + 1);
            mu_hi = std::min(mu_hi, last_pos + 1);
            for (int mu = 1; mu <= mu_hi; ++mu) {
                acc += in_p[i - mu + 1] * row[mu];
            }
        }
        out[i] = acc;
    }
}

void drift_backward_step(const EmissionTable& emissions, std::span<const uint8_t> read, int pos, uint8_t t,
                         int x_lo, std::span<const double> in, std::span<double> out) {
    const int width = static_cast<int>(out.size());
    const int len = static_cast<int>(read.size());
    const int cap = emissions.max_run();
    const double del = emissions.del();
    const double* in_p = in.data();
    for (int i = 0; i < width; ++i) {
        double acc = i - 1 >= 0 ? in_p[i - 1] * del : 0.0;
        const int start = pos + x_lo + i;
        if (start >= 0) {
            // Successor index i + mu - 1 and span end start + mu - 1 bound mu.
            int mu_hi = std::min(cap, width - i);
            mu_hi = std::min(mu_hi, len - start);
            for (int mu = 1; mu <= mu_hi; ++mu) {
                acc += in_p[i + mu - 1] * emissions.row_for(read[start + mu - 1], t)[mu];
            }
        }
        out[i] = acc;
    }
}

double block_likelihood(std::span<const uint8_t> received, std::span<const uint8_t> transmitted,
                        const IdsParams& params) {
    const EmissionTable emissions(params);
    const int u = static_cast<int>(transmitted.size());
    const int final_drift = static_cast<int>(received.size()) - u;
    if (final_drift < -u || final_drift > u * params.max_insertions) {
        return 0.0;
    }
    const int lo = -u;
    const int hi = std::max(0, u * params.max_insertions);
    const int width = hi - lo + 1;
    std::vector<double> cur(width, 0.0);
    std::vector<double> next(width, 0.0);
    cur[-lo] = 1.0;  // local drift starts at 0
    for (int y = 0; y < u; ++y) {
        drift_forward_step(emissions, received, y, transmitted[y], lo, cur, next);
        std::swap(cur, next);
    }
    return cur[final_drift - lo];
}

ReadDecoder::ReadDecoder(const InnerCodebook& codebook, std::span<const uint8_t> watermark,
                         const IdsParams& params, const DriftWindow& window)
    : q_(codebook.q), u_(codebook.u), params_(params), emissions_(params), window_(window) {
    if (u_ < 1 || watermark.size() % u_ != 0) {
        throw std::invalid_argument("watermark length must be a multiple of u");
    }
    n_ = static_cast<int>(watermark.size()) / u_;
    blocks_.resize(static_cast<size_t>(n_) * q_ * u_);
    for (int i = 0; i < n_; ++i) {
        for (int a = 0; a < q_; ++a) {
            const auto word = codebook.word(a);
            for (int y = 0; y < u_; ++y) {
                blocks_[(static_cast<size_t>(i) * q_ + a) * u_ + y] =
                    static_cast<uint8_t>(word[y] ^ watermark[static_cast<size_t>(i) * u_ + y]);
            }
        }
    }
}

DriftDistribution ReadDecoder::aligned(const DriftDistribution& d) const {
    DriftDistribution out;
    out.lo = window_.x_min;
    out.log_scale = d.log_scale;
    out.weights.assign(window_.width(), 0.0);
    for (int i = 0; i < static_cast<int>(d.weights.size()); ++i) {
        const int drift = d.lo + i;
        if (drift >= window_.x_min && drift <= window_.x_max) {
            out.weights[drift - window_.x_min] = d.weights[i];
        }
    }
    return out;
}

std::vector<DriftDistribution> ReadDecoder::forward_pass(std::span<const uint8_t> read, int s0,
                                                         const DriftDistribution& f1) const {
    std::vector<DriftDistribution> F(n_ + 1);
    F[0] = aligned(f1);
    if (!F[0].normalize()) {
        return F;
    }
    const int width = window_.width();
    std::vector<double> acc(width);
    std::vector<double> cur(width);
    std::vector<double> next(width);
    for (int i = 0; i < n_; ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int a = 0; a < q_; ++a) {
            std::copy(F[i].weights.begin(), F[i].weights.end(), cur.begin());
            for (int y = 0; y < u_; ++y) {
                drift_forward_step(emissions_, read, s0 + i * u_ + y, block_symbol(i, a, y), window_.x_min,
                                   cur, next);
                std::swap(cur, next);
            }
            for (int x = 0; x < width; ++x) {
                acc[x] += cur[x];
            }
        }
        F[i + 1].lo = window_.x_min;
        F[i + 1].log_scale = F[i].log_scale - std::log(static_cast<double>(q_));
        F[i + 1].weights.assign(acc.begin(), acc.end());
        if (!F[i + 1].normalize()) {
            return F;  // caller checks for the all-zero tail
        }
    }
    return F;
}

std::vector<DriftDistribution> ReadDecoder::backward_pass(std::span<const uint8_t> read, int s0,
                                                          const DriftDistribution& bn1) const {
    std::vector<DriftDistribution> B(n_ + 1);
    B[n_] = aligned(bn1);
    if (!B[n_].normalize()) {
        return B;
    }
    const int width = window_.width();
    std::vector<double> acc(width);
    std::vector<double> cur(width);
    std::vector<double> next(width);
    for (int i = n_ - 1; i >= 0; --i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int a = 0; a < q_; ++a) {
            std::copy(B[i + 1].weights.begin(), B[i + 1].weights.end(), cur.begin());
            for (int y = u_ - 1; y >= 0; --y) {
                drift_backward_step(emissions_, read, s0 + i * u_ + y, block_symbol(i, a, y), window_.x_min,
                                    cur, next);
                std::swap(cur, next);
            }
            for (int x = 0; x < width; ++x) {
                acc[x] += cur[x];
            }
        }
        B[i].lo = window_.x_min;
        B[i].log_scale = B[i + 1].log_scale - std::log(static_cast<double>(q_));
        B[i].weights.assign(acc.begin(), acc.end());
        if (!B[i].normalize()) {
            return B;
        }
    }
    return B;
}

ReadDecoder::Result ReadDecoder::decode(std::span<const uint8_t> read, int s0, const DriftDistribution& f1,
                                        const DriftDistribution& bn1) const {
    Result result;
    result.backward = backward_pass(read, s0, bn1);
    for (const auto& b : result.backward) {
        if (b.weights.empty() || b.is_zero()) {
            return result;
        }
    }
    const int width = window_.width();
    result.forward.resize(n_ + 1);
    result.forward[0] = aligned(f1);
    if (!result.forward[0].normalize()) {
        return result;
    }
    result.likelihoods = LikelihoodMatrix::zeros(n_, q_);

    std::vector<double> acc(width);
    std::vector<double> cur(width);
    std::vector<double> next(width);
    for (int i = 0; i < n_; ++i) {
        const auto& Bnext = result.backward[i + 1];
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int a = 0; a < q_; ++a) {
            std::copy(result.forward[i].weights.begin(), result.forward[i].weights.end(), cur.begin());
            for (int y = 0; y < u_; ++y) {
                drift_forward_step(emissions_, read, s0 + i * u_ + y, block_symbol(i, a, y), window_.x_min,
                                   cur, next);
                std::swap(cur, next);
            }
            double like = 0.0;
            for (int x = 0; x < width; ++x) {
                like += cur[x] * Bnext.weights[x];
                acc[x] += cur[x];
            }
            result.likelihoods.at(i, a) = like;
        }
        result.likelihoods.log_scale[i] = result.forward[i].log_scale + Bnext.log_scale;
        auto& Fnext = result.forward[i + 1];
        Fnext.lo = window_.x_min;
        Fnext.log_scale = result.forward[i].log_scale - std::log(static_cast<double>(q_));
        Fnext.weights.assign(acc.begin(), acc.end());
        if (!Fnext.normalize()) {
            return result;
        }
    }
    // Row normalization; any zero row marks the read undecodable.
    for (int i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (int a = 0; a < q_; ++a) {
            sum += result.likelihoods.at(i, a);
        }
        if (sum <= 0.0) {
            return result;
        }
        for (int a = 0; a < q_; ++a) {
            result.likelihoods.at(i, a) /= sum;
        }
        result.likelihoods.log_scale[i] += std::log(sum);
    }

    double total_f = 0.0;
    double total_b = 0.0;
    for (int x = 0; x < width; ++x) {
        total_f += result.forward[n_].weights[x] * result.backward[n_].weights[x];
        total_b += result.forward[0].weights[x] * result.backward[0].weights[x];
    }
    if (total_f <= 0.0 || total_b <= 0.0) {
        return result;
    }
    result.total_log_forward =
        std::log(total_f) + result.forward[n_].log_scale + result.backward[n_].log_scale;
    result.total_log_backward =
        std::log(total_b) + result.forward[0].log_scale + result.backward[0].log_scale;
    result.ok = true;
    return result;
}

}  // namespace nswm
