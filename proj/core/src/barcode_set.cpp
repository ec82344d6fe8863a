#include "nswm/barcode_set.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nswm/rng.hpp"

namespace nswm {

namespace {

uint64_t fnv1a64(std::string_view data, uint64_t hash = 0xcbf29ce484222325ull) {
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string symbols_to_digits(std::span<const uint8_t> symbols) {
    std::string out;
    out.reserve(symbols.size());
    for (uint8_t s : symbols) {
        out.push_back(static_cast<char>('0' + s));
    }
    return out;
}

std::vector<uint8_t> digits_to_symbols(std::string_view digits, int max_value) {
    std::vector<uint8_t> out;
    out.reserve(digits.size());
    for (char c : digits) {
        const int v = c - '0';
        if (v < 0 || v >= max_value) {
            throw std::runtime_error("invalid symbol digit in barcode set file");
        }
        out.push_back(static_cast<uint8_t>(v));
    }
    return out;
}

}  // namespace

BarcodeSet::BarcodeSet(OuterCode code, InnerCodebook codebook, std::vector<uint8_t> watermark,
                       NucleotideMap mapping, std::string flank, std::string consensus,
                       FilterThresholds thresholds, std::vector<SampleRecord> samples)
    : code_(std::move(code)),
      codebook_(std::move(codebook)),
      watermark_(std::move(watermark)),
      mapping_(mapping),
      flank_(std::move(flank)),
      consensus_(std::move(consensus)),
      thresholds_(thresholds),
      samples_(std::move(samples)) {
    if (code_.field().order() != codebook_.q) {
        throw std::invalid_argument("codebook size does not match the field order");
    }
    if (static_cast<int>(watermark_.size()) != barcode_length()) {
        throw std::invalid_argument("watermark length must equal n * u");
    }
    thresholds_.validate();
    mapping_.decode(flank_);      // both must be clean ACGT
    mapping_.decode(consensus_);
    row_by_id_.reserve(samples_.size() * 2);
    for (size_t row = 0; row < samples_.size(); ++row) {
        if (!row_by_id_.emplace(samples_[row].id, static_cast<int64_t>(row)).second) {
            throw std::invalid_argument("duplicate sample id in barcode set");
        }
    }
}

int64_t BarcodeSet::sample_row(uint64_t id) const {
    const auto it = row_by_id_.find(id);
    return it == row_by_id_.end() ? -1 : it->second;
}

std::string BarcodeSet::regenerate_barcode(uint64_t id) const {
    const auto codeword = code_.encode(code_.message_from_index(id));
    const auto carrier = expand(codeword, codebook_);
    return mapping_.encode(imprint(carrier, watermark_));
}

void BarcodeSet::validate() const {
    for (const auto& sample : samples_) {
        if (sample.id >= code_.message_count()) {
            throw std::runtime_error("sample id exceeds the message space");
        }
        if (regenerate_barcode(sample.id) != sample.barcode) {
            throw std::runtime_error("stored barcode for sample " + std::to_string(sample.id) +
                                     " does not regenerate from the set components");
        }
    }
}

void BuildParams::validate() const {
    if (q != 4 && q != 8 && q != 16) {
        throw std::invalid_argument("q must be 4, 8 or 16");
    }
    if (u < 1 || l < 1 || l % u != 0) {
        throw std::invalid_argument("l must be a positive multiple of u");
    }
    const int n = l / u;
    if (k < 1 || k >= n) {
        throw std::invalid_argument("need 1 <= k < n = l/u");
    }
    thresholds.validate();
    NucleotideMap::from_string(mapping);
}

BuildResult build_barcode_set(const BuildParams& params) {
    params.validate();
    const int n = params.l / params.u;
    const FieldTable field = FieldTable::with_default_poly(params.q);
    OuterCode code = construct_code(field, n, params.k, params.code_seed);
    InnerCodebook codebook = build_inner_codebook(params.q, params.u, params.codebook_seed,
                                                  params.codebook_search);
    const NucleotideMap mapping = NucleotideMap::from_string(params.mapping);
    const AdapterContext adapter{params.flank, params.consensus};

    std::vector<uint8_t> watermark(params.l);
    std::vector<IlsHistoryEntry> history;
    if (params.watermark_mode == WatermarkMode::ils) {
        WatermarkObjective objective(code, codebook, mapping, params.thresholds, adapter);
        IlsResult ils = ils_optimize(objective, params.watermark_seed, params.ils);
        watermark = std::move(ils.watermark);
        history = std::move(ils.history);
    } else {
        auto rng = make_stream(params.watermark_seed, 0);
        std::uniform_int_distribution<int> base(0, 3);
        for (auto& w : watermark) {
            w = static_cast<uint8_t>(base(rng));
        }
    }

    auto candidates = build_candidate_set(code, codebook, watermark, mapping);
    std::vector<std::string> sequences;
    sequences.reserve(candidates.size());
    for (const auto& c : candidates) {
        sequences.push_back(c.nucleotides);
    }
    ChemFilter filter(params.thresholds, adapter);
    FilterOutcome outcome = filter.run(sequences, true);
    if (outcome.survivors.empty()) {
        throw std::runtime_error("no barcode survived chemical filtering; re-optimize the watermark "
                                 "(different seed or larger budget) or relax the thresholds");
    }

    std::vector<SampleRecord> samples;
    samples.reserve(outcome.survivors.size());
    for (uint32_t idx : outcome.survivors) {
        samples.push_back({candidates[idx].message_index, candidates[idx].nucleotides});
    }

    int code_distance = 0;
    if (code.message_count() <= (1ull << 20)) {
        code_distance = code.min_distance();
    }

    BuildResult result{BarcodeSet(std::move(code), codebook, std::move(watermark), mapping, params.flank,
                                  params.consensus, params.thresholds, std::move(samples)),
                       std::move(history),
                       std::move(outcome.rejections),
                       static_cast<int>(candidates.size()),
                       codebook.min_distance,
                       code_distance};
    return result;
}

void save_barcode_set(const BarcodeSet& set, std::ostream& os) {
    std::ostringstream body;
    body << "nswm-barcode-set v" << kBarcodeSetVersion << '\n';
    body << "field " << set.code().field().order() << " 0x" << std::hex << set.code().field().poly()
         << std::dec << '\n';
    body << "code " << set.code().n() << ' ' << set.code().k() << ' ' << set.code().seed() << '\n';
    const auto& rows = set.code().parity_rows();
    for (size_t r = 0; r < rows.size(); ++r) {
        body << "hrow " << r;
        for (const auto& e : rows[r]) {
            body << ' ' << e.col << ':' << static_cast<int>(e.val);
        }
        body << '\n';
    }
    body << "codebook " << set.codebook().q << ' ' << set.codebook().u << ' ' << set.codebook().min_distance
         << '\n';
    for (int a = 0; a < set.codebook().q; ++a) {
        body << "inner " << a << ' ' << symbols_to_digits(set.codebook().word(a)) << '\n';
    }
    body << "watermark " << symbols_to_digits(set.watermark()) << '\n';
    body << "mapping " << set.mapping().to_string() << '\n';
    body << "flank " << set.flank() << '\n';
    body << "consensus " << set.consensus() << '\n';
    const auto& t = set.thresholds();
    body << "thresholds " << format_double(t.gc_min) << ' ' << format_double(t.gc_max) << ' '
         << t.max_homopolymer << ' ' << t.max_heteroduplex << ' ' << t.max_hairpin << '\n';
    body << "samples " << set.samples().size() << '\n';
    for (const auto& s : set.samples()) {
        body << "sample " << s.id << ' ' << s.barcode << '\n';
    }
    const std::string text = body.str();
    char checksum[24];
    std::snprintf(checksum, sizeof checksum, "%016" PRIx64, fnv1a64(text));
    os << text << "checksum " << checksum << '\n';
}

void save_barcode_set(const BarcodeSet& set, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    save_barcode_set(set, os);
    os.flush();
    if (!os) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

namespace {

struct LineParser {
    std::istringstream stream;

    explicit LineParser(const std::string& line) : stream(line) {}

    std::string word(const char* what) {
        std::string w;
        if (!(stream >> w)) {
            throw std::runtime_error(std::string("barcode set file: missing ") + what);
        }
        return w;
    }

    template <typename T>
    T number(const char* what) {
        T v{};
        if (!(stream >> v)) {
            throw std::runtime_error(std::string("barcode set file: bad ") + what);
        }
        return v;
    }
};

void expect_keyword(LineParser& parser, const char* keyword) {
    if (parser.word(keyword) != keyword) {
        throw std::runtime_error(std::string("barcode set file: expected '") + keyword + "' line");
    }
}

}  // namespace

BarcodeSet load_barcode_set(std::istream& is) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    if (lines.size() < 3) {
        throw std::runtime_error("barcode set file: truncated");
    }
    if (lines.front() != "nswm-barcode-set v1") {
        throw std::runtime_error("barcode set file: unknown format or version");
    }
    // Checksum guards the full body.
    {
        LineParser parser(lines.back());
        expect_keyword(parser, "checksum");
        const std::string stored = parser.word("checksum value");
        std::string text;
        for (size_t i = 0; i + 1 < lines.size(); ++i) {
            text += lines[i];
            text += '\n';
        }
        char computed[24];
        std::snprintf(computed, sizeof computed, "%016" PRIx64, fnv1a64(text));
        if (stored != computed) {
            throw std::runtime_error("barcode set file: checksum mismatch");
        }
        lines.pop_back();
    }

    size_t cursor = 1;
    auto next_line = [&]() -> LineParser {
        if (cursor >= lines.size()) {
            throw std::runtime_error("barcode set file: truncated");
        }
        return LineParser(lines[cursor++]);
    };

    auto field_line = next_line();
    expect_keyword(field_line, "field");
    const int q = field_line.number<int>("field order");
    const std::string poly_text = field_line.word("field polynomial");
    const unsigned poly = static_cast<unsigned>(std::stoul(poly_text, nullptr, 0));
    FieldTable field(q, poly);

    auto code_line = next_line();
    expect_keyword(code_line, "code");
    const int n = code_line.number<int>("code n");
    const int k = code_line.number<int>("code k");
    const uint64_t code_seed = code_line.number<uint64_t>("code seed");

    std::vector<std::vector<OuterCode::Entry>> rows(n - k);
    for (int r = 0; r < n - k; ++r) {
        auto row_line = next_line();
        expect_keyword(row_line, "hrow");
        const int index = row_line.number<int>("hrow index");
        if (index != r) {
            throw std::runtime_error("barcode set file: hrow lines out of order");
        }
        std::string entry;
        while (row_line.stream >> entry) {
            const size_t colon = entry.find(':');
            if (colon == std::string::npos) {
                throw std::runtime_error("barcode set file: bad hrow entry");
            }
            rows[r].push_back({std::stoi(entry.substr(0, colon)),
                               static_cast<uint8_t>(std::stoi(entry.substr(colon + 1)))});
        }
    }
    OuterCode code(std::move(field), n, k, code_seed, std::move(rows));

    auto codebook_line = next_line();
    expect_keyword(codebook_line, "codebook");
    InnerCodebook codebook;
    codebook.q = codebook_line.number<int>("codebook q");
    codebook.u = codebook_line.number<int>("codebook u");
    codebook.min_distance = codebook_line.number<int>("codebook distance");
    if (codebook.q != q) {
        throw std::runtime_error("barcode set file: codebook size does not match field order");
    }
    codebook.words.resize(static_cast<size_t>(codebook.q) * codebook.u);
    for (int a = 0; a < codebook.q; ++a) {
        auto word_line = next_line();
        expect_keyword(word_line, "inner");
        if (word_line.number<int>("inner index") != a) {
            throw std::runtime_error("barcode set file: inner lines out of order");
        }
        const auto symbols = digits_to_symbols(word_line.word("inner word"), 4);
        if (static_cast<int>(symbols.size()) != codebook.u) {
            throw std::runtime_error("barcode set file: inner word length mismatch");
        }
        std::copy(symbols.begin(), symbols.end(), codebook.words.begin() + static_cast<size_t>(a) * codebook.u);
    }

    auto watermark_line = next_line();
    expect_keyword(watermark_line, "watermark");
    const auto watermark = digits_to_symbols(watermark_line.word("watermark"), 4);

    auto mapping_line = next_line();
    expect_keyword(mapping_line, "mapping");
    const NucleotideMap mapping = NucleotideMap::from_string(mapping_line.word("mapping"));

    auto flank_line = next_line();
    expect_keyword(flank_line, "flank");
    const std::string flank = flank_line.word("flank");

    auto consensus_line = next_line();
    expect_keyword(consensus_line, "consensus");
    const std::string consensus = consensus_line.word("consensus");

    auto thresholds_line = next_line();
    expect_keyword(thresholds_line, "thresholds");
    FilterThresholds thresholds;
    thresholds.gc_min = thresholds_line.number<double>("gc_min");
    thresholds.gc_max = thresholds_line.number<double>("gc_max");
    thresholds.max_homopolymer = thresholds_line.number<int>("max_homopolymer");
    thresholds.max_heteroduplex = thresholds_line.number<int>("max_heteroduplex");
    thresholds.max_hairpin = thresholds_line.number<int>("max_hairpin");

    auto samples_line = next_line();
    expect_keyword(samples_line, "samples");
    const uint64_t sample_count = samples_line.number<uint64_t>("sample count");
    std::vector<SampleRecord> samples;
    samples.reserve(sample_count);
    for (uint64_t i = 0; i < sample_count; ++i) {
        auto sample_line = next_line();
        expect_keyword(sample_line, "sample");
        SampleRecord record;
        record.id = sample_line.number<uint64_t>("sample id");
        record.barcode = sample_line.word("sample barcode");
        samples.push_back(std::move(record));
    }
    if (cursor != lines.size()) {
        throw std::runtime_error("barcode set file: trailing content");
    }

    BarcodeSet set(std::move(code), std::move(codebook), watermark, mapping, flank, consensus, thresholds,
                   std::move(samples));
    set.validate();
    return set;
}

BarcodeSet load_barcode_set(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return load_barcode_set(is);
}

}  // namespace nswm
