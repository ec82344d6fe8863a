#include "nswm/outer_code.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "nswm/rng.hpp"

namespace nswm {

namespace {

constexpr uint64_t kEnumerationGuard = 1ull << 20;

// Solves C * P = A over GF(q), where C is the m x m submatrix of H on the
// parity columns and A the m x k submatrix on the message columns. Returns
// the dense m x k matrix P (parity = P * message), or nullopt if C is
// singular.
std::optional<std::vector<uint8_t>> solve_encoder(const FieldTable& field, int n, int k,
                                                  const std::vector<std::vector<OuterCode::Entry>>& rows) {
    const int m = n - k;
    // Augmented [C | A] as dense rows.
    std::vector<std::vector<uint8_t>> aug(m, std::vector<uint8_t>(m + k, 0));
    for (int r = 0; r < m; ++r) {
        for (const auto& e : rows[r]) {
            if (e.col >= k) {
                aug[r][e.col - k] = e.val;
            } else {
                aug[r][m + e.col] = e.val;
            }
        }
    }
    for (int c = 0; c < m; ++c) {
        int pivot = -1;
        for (int r = c; r < m; ++r) {
            if (aug[r][c] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) {
            return std::nullopt;
        }
        std::swap(aug[c], aug[pivot]);
        const uint8_t inv = field.inv(aug[c][c]);
        for (int j = 0; j < m + k; ++j) {
            aug[c][j] = field.mul(aug[c][j], inv);
        }
        for (int r = 0; r < m; ++r) {
            if (r == c || aug[r][c] == 0) {
                continue;
            }
            const uint8_t factor = aug[r][c];
            for (int j = 0; j < m + k; ++j) {
                aug[r][j] = field.add(aug[r][j], field.mul(factor, aug[c][j]));
            }
        }
    }
    std::vector<uint8_t> encoder(static_cast<size_t>(m) * k);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < k; ++c) {
            encoder[static_cast<size_t>(r) * k + c] = aug[r][m + c];
        }
    }
    return encoder;
}

struct CandidateMatrix {
    std::vector<std::vector<OuterCode::Entry>> rows;
};

// One construction attempt: column-regular random H with 4-cycle avoidance.
// Returns nullopt when the draw violates a structural requirement.
std::optional<CandidateMatrix> draw_matrix(const FieldTable& field, int n, int k, int column_weight,
                                           std::mt19937_64& rng) {
    const int m = n - k;
    const int q = field.order();
    // Weight 2 up to n = 12: at these sizes the denser graphs trade a point
    // or two of distance for an order of magnitude more ten-iteration BP
    // failures. Beyond that the graphs are big enough for weight 3 to pay.
    const int col_weight = std::min(column_weight > 0 ? column_weight : (n <= 12 ? 2 : 3), m);
    std::uniform_int_distribution<int> val_pick(1, q - 1);

    // Rows are used lowest-degree first (random tie-break), which keeps row
    // weights near the average n * wc / m; uniform placement frequently
    // leaves under-constrained rows at these sizes.
    std::vector<int> degree(m, 0);
    std::vector<int> order(m);
    for (int r = 0; r < m; ++r) {
        order[r] = r;
    }
    std::vector<std::vector<int>> supports(n);
    for (int c = 0; c < n; ++c) {
        std::vector<int> support;
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::shuffle(order.begin(), order.end(), rng);
            std::stable_sort(order.begin(), order.end(),
                             [&](int a, int b) { return degree[a] < degree[b]; });
            // Widen the pool beyond the lowest-degree rows as retries pile
            // up, so 4-cycle avoidance can still escape forced picks.
            const int pool = std::min(m, col_weight + attempt / 4);
            std::shuffle(order.begin(), order.begin() + std::max(pool, col_weight), rng);
            support.assign(order.begin(), order.begin() + col_weight);
            std::sort(support.begin(), support.end());
            // Two columns sharing two rows form a 4-cycle; avoid when possible.
            bool cycle = false;
            for (int prev = 0; prev < c && !cycle; ++prev) {
                int shared = 0;
                for (int r : support) {
                    if (std::find(supports[prev].begin(), supports[prev].end(), r) != supports[prev].end()) {
                        ++shared;
                    }
                }
                cycle = shared >= 2;
            }
            if (!cycle) {
                break;
            }
        }
        supports[c] = support;
        for (int r : support) {
            degree[r] += 1;
        }
    }

    CandidateMatrix candidate;
    candidate.rows.assign(m, {});
    std::vector<std::vector<uint8_t>> col_vals(n);
    for (int c = 0; c < n; ++c) {
        for (int r : supports[c]) {
            const uint8_t v = static_cast<uint8_t>(val_pick(rng));
            candidate.rows[r].push_back({c, v});
            col_vals[c].push_back(v);
        }
    }

    // A row with fewer than two entries either never constrains anything or
    // pins a symbol to zero; both make a degenerate code.
    for (const auto& row : candidate.rows) {
        if (row.size() < 2) {
            return std::nullopt;
        }
    }
    // No two identical columns (undetectable single-symbol confusions).
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (supports[a] == supports[b] && col_vals[a] == col_vals[b]) {
                return std::nullopt;
            }
        }
    }
    for (auto& row : candidate.rows) {
        std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.col < y.col; });
    }
    return candidate;
}

}  // namespace

LikelihoodMatrix LikelihoodMatrix::zeros(int n, int q) {
    LikelihoodMatrix L;
    L.n = n;
    L.q = q;
    L.values.assign(static_cast<size_t>(n) * q, 0.0);
    L.log_scale.assign(n, 0.0);
    return L;
}

void LikelihoodMatrix::normalize_rows() {
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int a = 0; a < q; ++a) {
            sum += at(i, a);
        }
        if (sum <= 0.0) {
            throw std::domain_error("likelihood row " + std::to_string(i) + " is all zero");
        }
        for (int a = 0; a < q; ++a) {
            at(i, a) /= sum;
        }
        log_scale[i] += std::log(sum);
    }
}

OuterCode::OuterCode(FieldTable field, int n, int k, uint64_t seed, std::vector<std::vector<Entry>> rows)
    : field_(std::move(field)), n_(n), k_(k), seed_(seed), rows_(std::move(rows)) {
    if (k < 1 || k >= n) {
        throw std::invalid_argument("need 1 <= k < n");
    }
    if (static_cast<int>(rows_.size()) != n - k) {
        throw std::invalid_argument("parity-check matrix must have n - k rows");
    }
    for (const auto& row : rows_) {
        for (const auto& e : row) {
            if (e.col < 0 || e.col >= n || e.val == 0 || e.val >= field_.order()) {
                throw std::invalid_argument("invalid parity-check entry");
            }
        }
    }
    auto encoder = solve_encoder(field_, n_, k_, rows_);
    if (!encoder) {
        throw std::runtime_error("parity submatrix is singular; no systematic encoder");
    }
    encoder_ = std::move(*encoder);
}

uint64_t OuterCode::message_count() const {
    uint64_t count = 1;
    for (int i = 0; i < k_; ++i) {
        count *= static_cast<uint64_t>(field_.order());
    }
    return count;
}

std::vector<uint8_t> OuterCode::encode(std::span<const uint8_t> message) const {
    if (static_cast<int>(message.size()) != k_) {
        throw std::invalid_argument("message must have k symbols");
    }
    for (uint8_t x : message) {
        if (x >= field_.order()) {
            throw std::invalid_argument("message symbol out of field range");
        }
    }
    std::vector<uint8_t> codeword(n_, 0);
    std::copy(message.begin(), message.end(), codeword.begin());
    const int m = n_ - k_;
    for (int r = 0; r < m; ++r) {
        uint8_t acc = 0;
        for (int c = 0; c < k_; ++c) {
            acc = field_.add(acc, field_.mul(encoder_[static_cast<size_t>(r) * k_ + c], message[c]));
        }
        codeword[k_ + r] = acc;
    }
    return codeword;
}

bool OuterCode::satisfies_checks(std::span<const uint8_t> codeword) const {
    if (static_cast<int>(codeword.size()) != n_) {
        return false;
    }
    for (const auto& row : rows_) {
        uint8_t acc = 0;
        for (const auto& e : row) {
            acc = field_.add(acc, field_.mul(e.val, codeword[e.col]));
        }
        if (acc != 0) {
            return false;
        }
    }
    return true;
}

std::vector<uint8_t> OuterCode::message_from_index(uint64_t index) const {
    std::vector<uint8_t> message(k_, 0);
    const uint64_t q = field_.order();
    for (int i = k_ - 1; i >= 0; --i) {
        message[i] = static_cast<uint8_t>(index % q);
        index /= q;
    }
    return message;
}

uint64_t OuterCode::index_from_message(std::span<const uint8_t> message) const {
    uint64_t index = 0;
    for (uint8_t x : message) {
        index = index * field_.order() + x;
    }
    return index;
}

int OuterCode::min_distance() const {
    const uint64_t count = message_count();
    if (count > kEnumerationGuard) {
        throw std::runtime_error("codeword enumeration guard exceeded");
    }
    int best = n_ + 1;
    for (uint64_t idx = 1; idx < count; ++idx) {
        const auto cw = encode(message_from_index(idx));
        int weight = 0;
        for (uint8_t s : cw) {
            weight += s != 0;
        }
        best = std::min(best, weight);
    }
    return best;
}

OuterCode construct_code(const FieldTable& field, int n, int k, uint64_t seed,
                         const CodeConstructionOptions& options) {
    if (k < 1 || k >= n) {
        throw std::invalid_argument("need 1 <= k < n");
    }
    uint64_t message_count = 1;
    for (int i = 0; i < k; ++i) {
        message_count *= static_cast<uint64_t>(field.order());
    }
    const bool rank_by_distance = options.optimize_distance && message_count <= kEnumerationGuard;

    std::optional<OuterCode> best;
    int best_distance = -1;
    int found = 0;
    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
        auto rng = make_stream(seed, static_cast<uint64_t>(attempt));
        auto candidate = draw_matrix(field, n, k, options.column_weight, rng);
        if (!candidate) {
            continue;
        }
        if (!solve_encoder(field, n, k, candidate->rows)) {
            continue;
        }
        OuterCode code(field, n, k, seed, std::move(candidate->rows));
        if (!rank_by_distance) {
            return code;
        }
        const int distance = code.min_distance();
        if (distance > best_distance) {
            best_distance = distance;
            best = std::move(code);
        }
        if (++found >= options.distance_attempts) {
            break;
        }
    }
    if (!best) {
        throw std::runtime_error("code construction failed after " + std::to_string(options.max_attempts) +
                                 " attempts (n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                                 "); try a different seed");
    }
    return std::move(*best);
}

namespace {

// XOR convolution: out[x] = sum_y f[y] * g[x ^ y]. GF(2^p) addition is XOR,
// so this is the distribution of a sum of independent field elements.
void gf_convolve(std::span<const double> f, std::span<const double> g, std::span<double> out) {
    const int q = static_cast<int>(out.size());
    for (int x = 0; x < q; ++x) {
        out[x] = 0.0;
    }
    for (int y = 0; y < q; ++y) {
        const double fy = f[y];
        if (fy == 0.0) {
            continue;
        }
        for (int z = 0; z < q; ++z) {
            out[y ^ z] += fy * g[z];
        }
    }
}

void normalize_or_uniform(std::span<double> msg) {
    double sum = 0.0;
    for (double v : msg) {
        sum += v;
    }
    if (sum > 0.0) {
        for (double& v : msg) {
            v /= sum;
        }
    } else {
        const double u = 1.0 / static_cast<double>(msg.size());
        for (double& v : msg) {
            v = u;
        }
    }
}

}  // namespace

DecodeOutcome bp_decode(const OuterCode& code, const LikelihoodMatrix& L, int max_iters) {
    const int n = code.n();
    const int q = code.field().order();
    if (L.n != n || L.q != q) {
        throw std::invalid_argument("likelihood matrix dimensions do not match the code");
    }
    if (max_iters < 0) {
        throw std::invalid_argument("max_iters must be >= 0");
    }
    const auto& rows = code.parity_rows();
    const FieldTable& field = code.field();

    // Flatten the factor graph edges.
    struct Edge {
        int row;
        int col;
        uint8_t val;
    };
    std::vector<Edge> edges;
    std::vector<std::vector<int>> row_edges(rows.size());
    std::vector<std::vector<int>> col_edges(n);
    for (size_t r = 0; r < rows.size(); ++r) {
        for (const auto& e : rows[r]) {
            row_edges[r].push_back(static_cast<int>(edges.size()));
            col_edges[e.col].push_back(static_cast<int>(edges.size()));
            edges.push_back({static_cast<int>(r), e.col, e.val});
        }
    }
    const int E = static_cast<int>(edges.size());

    LikelihoodMatrix prior = L;
    prior.normalize_rows();

    std::vector<double> v2c(static_cast<size_t>(E) * q);
    std::vector<double> c2v(static_cast<size_t>(E) * q, 1.0);
    std::vector<double> belief(q);
    std::vector<uint8_t> hard(n);
    auto msg = [q](std::vector<double>& store, int e) {
        return std::span<double>(store.data() + static_cast<size_t>(e) * q, static_cast<size_t>(q));
    };

    for (int iter = 0;; ++iter) {
        // Hard-threshold current beliefs; stop when all checks hold.
        for (int i = 0; i < n; ++i) {
            for (int a = 0; a < q; ++a) {
                belief[a] = prior.at(i, a);
            }
            for (int e : col_edges[i]) {
                for (int a = 0; a < q; ++a) {
                    belief[a] *= c2v[static_cast<size_t>(e) * q + a];
                }
            }
            int arg = 0;
            for (int a = 1; a < q; ++a) {
                if (belief[a] > belief[arg]) {
                    arg = a;
                }
            }
            hard[i] = static_cast<uint8_t>(arg);
        }
        if (code.satisfies_checks(hard)) {
            DecodeOutcome out;
            out.status = DecodeStatus::decoded;
            out.message.assign(hard.begin(), hard.begin() + code.k());
            out.iterations = iter;
            return out;
        }
        if (iter == max_iters) {
            return DecodeOutcome{DecodeStatus::failure, {}, max_iters};
        }

        // Variable -> check.
        for (int i = 0; i < n; ++i) {
            const auto& ces = col_edges[i];
            const int deg = static_cast<int>(ces.size());
            for (int s = 0; s < deg; ++s) {
                auto out = msg(v2c, ces[s]);
                for (int a = 0; a < q; ++a) {
                    out[a] = prior.at(i, a);
                }
                for (int t = 0; t < deg; ++t) {
                    if (t == s) {
                        continue;
                    }
                    const double* in = c2v.data() + static_cast<size_t>(ces[t]) * q;
                    for (int a = 0; a < q; ++a) {
                        out[a] *= in[a];
                    }
                }
                normalize_or_uniform(out);
            }
        }

        // Check -> variable, via prefix/suffix XOR convolutions of the
        // weight-permuted incoming messages.
        std::vector<double> permuted;
        std::vector<double> prefix;
        std::vector<double> suffix;
        std::vector<double> combined(q);
        for (size_t r = 0; r < rows.size(); ++r) {
            const auto& res = row_edges[r];
            const int deg = static_cast<int>(res.size());
            permuted.assign(static_cast<size_t>(deg) * q, 0.0);
            for (int s = 0; s < deg; ++s) {
                const Edge& e = edges[res[s]];
                const double* in = v2c.data() + static_cast<size_t>(res[s]) * q;
                for (int a = 0; a < q; ++a) {
                    permuted[static_cast<size_t>(s) * q + field.mul(e.val, static_cast<uint8_t>(a))] = in[a];
                }
            }
            prefix.assign(static_cast<size_t>(deg + 1) * q, 0.0);
            suffix.assign(static_cast<size_t>(deg + 1) * q, 0.0);
            prefix[0] = 1.0;  // point mass at 0
            suffix[static_cast<size_t>(deg) * q] = 1.0;
            for (int s = 0; s < deg; ++s) {
                gf_convolve({prefix.data() + static_cast<size_t>(s) * q, static_cast<size_t>(q)},
                            {permuted.data() + static_cast<size_t>(s) * q, static_cast<size_t>(q)},
                            {prefix.data() + static_cast<size_t>(s + 1) * q, static_cast<size_t>(q)});
            }
            for (int s = deg - 1; s >= 0; --s) {
                gf_convolve({suffix.data() + static_cast<size_t>(s + 1) * q, static_cast<size_t>(q)},
                            {permuted.data() + static_cast<size_t>(s) * q, static_cast<size_t>(q)},
                            {suffix.data() + static_cast<size_t>(s) * q, static_cast<size_t>(q)});
            }
            for (int s = 0; s < deg; ++s) {
                gf_convolve({prefix.data() + static_cast<size_t>(s) * q, static_cast<size_t>(q)},
                            {suffix.data() + static_cast<size_t>(s + 1) * q, static_cast<size_t>(q)},
                            combined);
                const Edge& e = edges[res[s]];
                auto out = msg(c2v, res[s]);
                for (int a = 0; a < q; ++a) {
                    out[a] = combined[field.mul(e.val, static_cast<uint8_t>(a))];
                }
                normalize_or_uniform(out);
            }
        }
    }
}

std::vector<uint8_t> ml_decode(const OuterCode& code, const LikelihoodMatrix& L) {
    const int n = code.n();
    const int q = code.field().order();
    if (L.n != n || L.q != q) {
        throw std::invalid_argument("likelihood matrix dimensions do not match the code");
    }
    const uint64_t count = code.message_count();
    if (count > kEnumerationGuard) {
        throw std::runtime_error("codeword enumeration guard exceeded");
    }
    uint64_t best_index = 0;
    double best_score = -1.0;
    for (uint64_t idx = 0; idx < count; ++idx) {
        const auto cw = code.encode(code.message_from_index(idx));
        double score = 1.0;
        for (int i = 0; i < n; ++i) {
            score *= L.at(i, cw[i]);
        }
        if (score > best_score) {
            best_score = score;
            best_index = idx;
        }
    }
    return code.message_from_index(best_index);
}

}  // namespace nswm
