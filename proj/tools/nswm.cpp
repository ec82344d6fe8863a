// Command-line front end: build / filter / simulate / demux / eval.
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "nswm/barcode_set.hpp"
#include "nswm/demux.hpp"
#include "nswm/eval.hpp"
#include "nswm/parallel.hpp"
#include "nswm/rng.hpp"
#include "nswm/seq_io.hpp"

namespace {

using namespace nswm;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    return os;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw std::runtime_error("cannot open " + path);
    }
    return is;
}

struct BuildCli {
    BuildParams params;
    uint64_t seed = 1;
    bool seed_set = false;
    std::string watermark_mode = "ils";
    std::string out;
    std::string trace;
};

void run_build(const BuildCli& cli) {
    BuildParams params = cli.params;
    if (cli.seed_set) {
        params.code_seed = cli.seed;
        params.codebook_seed = cli.seed;
        params.watermark_seed = cli.seed;
    }
    params.watermark_mode = cli.watermark_mode == "random" ? WatermarkMode::random : WatermarkMode::ils;
    params.validate();

    BuildResult result = build_barcode_set(params);
    save_barcode_set(result.set, std::filesystem::path(cli.out));

    if (!cli.trace.empty()) {
        auto os = open_output(cli.trace);
        write_ils_trace(os, result.ils_history);
    }
    std::cerr << "candidates " << result.candidate_count << '\n'
              << "survivors " << result.set.samples().size() << '\n'
              << "codebook_distance " << result.codebook_distance << '\n'
              << "code_distance " << result.code_distance << '\n';
    if (!result.ils_history.empty()) {
        std::cerr << "watermark_cost initial " << result.ils_history.front().cost << " final "
                  << result.ils_history.back().cost << " accepted_moves " << result.ils_history.size() - 1
                  << '\n';
    }
    std::cerr << "wrote " << cli.out << '\n';
}

struct FilterCli {
    std::string set_path;
    std::string fasta_path;
    std::string report_path;
    std::string survivors_path;
    FilterThresholds thresholds;
    std::string flank = std::string(kDefaultFlank);
    std::string consensus = std::string(kDefaultConsensus);
};

void run_filter(const FilterCli& cli) {
    std::vector<std::string> names;
    std::vector<std::string> sequences;
    FilterThresholds thresholds = cli.thresholds;
    AdapterContext adapter{cli.flank, cli.consensus};

    if (!cli.set_path.empty()) {
        const BarcodeSet set = load_barcode_set(std::filesystem::path(cli.set_path));
        thresholds = set.thresholds();
        adapter = {set.flank(), set.consensus()};
        const auto candidates = build_candidate_set(set.code(), set.codebook(), set.watermark(),
                                                    set.mapping());
        for (const auto& c : candidates) {
            names.push_back(std::to_string(c.message_index));
            sequences.push_back(c.nucleotides);
        }
    } else {
        auto is = open_input(cli.fasta_path);
        SeqReader reader(is);
        SeqRecord record;
        while (true) {
            const auto status = reader.next(record);
            if (status == SeqReader::Status::eof) {
                break;
            }
            if (status == SeqReader::Status::malformed) {
                throw std::runtime_error("malformed record in " + cli.fasta_path);
            }
            names.push_back(record.id);
            sequences.push_back(record.seq);
        }
    }

    ChemFilter filter(thresholds, adapter);
    const FilterOutcome outcome = filter.run(sequences, true);

    if (cli.report_path.empty()) {
        write_rejection_report(std::cout, outcome.rejections);
    } else {
        auto os = open_output(cli.report_path);
        write_rejection_report(os, outcome.rejections);
    }
    if (!cli.survivors_path.empty()) {
        auto os = open_output(cli.survivors_path);
        for (uint32_t idx : outcome.survivors) {
            write_fasta(os, SeqRecord{names[idx], "", sequences[idx], ""});
        }
    }
    std::cerr << "candidates " << sequences.size() << '\n'
              << "survivors " << outcome.survivors.size() << '\n'
              << "rejected " << outcome.rejections.size() << '\n';
}

struct SimulateCli {
    std::string set_path;
    std::string in_path;
    std::string out;
    std::string format = "fasta";
    uint64_t n = 1000;
    uint64_t seed = 1;
    int insert_len = 64;
    IdsParams params = IdsParams::smrt_profile();
};

void run_simulate(const SimulateCli& cli) {
    cli.params.validate();
    auto os = open_output(cli.out);
    const bool fastq = cli.format == "fastq";
    const NucleotideMap acgt;  // channel symbols use the identity mapping

    if (!cli.set_path.empty()) {
        const BarcodeSet set = load_barcode_set(std::filesystem::path(cli.set_path));
        const uint64_t b = set.samples().size();
        for (uint64_t i = 0; i < cli.n; ++i) {
            const uint64_t row = i % b;
            auto rng = make_stream(cli.seed, i);
            const auto clean = synth_read_symbols(set, row, cli.insert_len, rng);
            const auto noisy = transmit(clean, cli.params, rng);
            SeqRecord record;
            record.id = "r" + std::to_string(i);
            record.comment = "sample=" + std::to_string(set.samples()[row].id) +
                             " seed=" + std::to_string(cli.seed);
            record.seq = set.mapping().encode(noisy);
            if (fastq) {
                record.qual.assign(record.seq.size(), 'I');
                write_fastq(os, record);
            } else {
                write_fasta(os, record);
            }
        }
        std::cerr << "wrote " << cli.n << " reads to " << cli.out << '\n';
        return;
    }

    auto is = open_input(cli.in_path);
    SeqReader reader(is);
    SeqRecord record;
    uint64_t index = 0;
    while (true) {
        const auto status = reader.next(record);
        if (status == SeqReader::Status::eof) {
            break;
        }
        if (status == SeqReader::Status::malformed) {
            throw std::runtime_error("malformed record in " + cli.in_path);
        }
        auto rng = make_stream(cli.seed, index);
        const auto clean = acgt.decode(record.seq);
        const auto noisy = transmit(clean, cli.params, rng);
        SeqRecord out_record;
        out_record.id = record.id;
        out_record.comment = (record.comment.empty() ? "" : record.comment + " ") +
                             "seed=" + std::to_string(cli.seed);
        out_record.seq = acgt.encode(noisy);
        if (fastq) {
            out_record.qual.assign(out_record.seq.size(), 'I');
            write_fastq(os, out_record);
        } else {
            write_fasta(os, out_record);
        }
        ++index;
    }
    std::cerr << "wrote " << index << " reads to " << cli.out << '\n';
}

struct DemuxCli {
    std::string set_path;
    std::string reads_path;
    std::string out;
    std::string summary;
    IdsParams params = IdsParams::smrt_profile();
    DemuxOptions options;
    int threads = 0;
    bool strict = false;
};

void run_demux(const DemuxCli& cli) {
    const BarcodeSet set = load_barcode_set(std::filesystem::path(cli.set_path));
    const Demultiplexer demux(set, cli.params, cli.options);
    auto is = open_input(cli.reads_path);

    DemuxFileSummary summary;
    if (cli.out.empty()) {
        summary = demultiplex_stream(demux, is, std::cout, cli.strict, cli.threads);
    } else {
        auto os = open_output(cli.out);
        summary = demultiplex_stream(demux, is, os, cli.strict, cli.threads);
    }
    if (cli.summary.empty()) {
        write_demux_summary(std::cerr, summary);
    } else {
        auto os = open_output(cli.summary);
        write_demux_summary(os, summary);
    }
}

struct EvalCli {
    std::string set_path;
    std::string out;
    IdsParams params = IdsParams::smrt_profile();
    uint64_t n = 100000;
    uint64_t seed = 1;
    EvalOptions options;
    std::string sweep;  // pmut:lo:hi:steps
};

void run_eval(const EvalCli& cli) {
    const BarcodeSet set = load_barcode_set(std::filesystem::path(cli.set_path));
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!cli.out.empty()) {
        file = open_output(cli.out);
        os = &file;
    }
    if (!cli.sweep.empty()) {
        std::string tag;
        double lo = 0.0;
        double hi = 0.0;
        int steps = 0;
        std::istringstream parts(cli.sweep);
        std::string token;
        std::vector<std::string> tokens;
        while (std::getline(parts, token, ':')) {
            tokens.push_back(token);
        }
        if (tokens.size() != 4 || tokens[0] != "pmut") {
            throw CLI::ValidationError("--sweep", "expected pmut:lo:hi:steps");
        }
        tag = tokens[0];
        lo = std::stod(tokens[1]);
        hi = std::stod(tokens[2]);
        steps = std::stoi(tokens[3]);
        const auto points =
            run_sweep(set, lo, hi, steps, cli.params.max_insertions, cli.n, cli.seed, cli.options);
        write_sweep(*os, points);
        return;
    }
    const MonteCarloReport report = run_experiment(set, cli.params, cli.n, cli.seed, cli.options);
    write_report(*os, report);
}

void add_channel_flags(CLI::App* cmd, IdsParams& params) {
    cmd->add_option("--pi", params.p_ins, "insertion probability")->check(CLI::Range(0.0, 0.999));
    cmd->add_option("--pd", params.p_del, "deletion probability")->check(CLI::Range(0.0, 0.999));
    cmd->add_option("--ps", params.p_sub, "substitution probability")->check(CLI::Range(0.0, 0.999));
    cmd->add_option("--max-insertions", params.max_insertions, "insertion cap per base")
        ->check(CLI::Range(0, 16));
}

void add_threshold_flags(CLI::App* cmd, FilterThresholds& t) {
    cmd->add_option("--gc-min", t.gc_min, "minimum GC fraction");
    cmd->add_option("--gc-max", t.gc_max, "maximum GC fraction");
    cmd->add_option("--max-homopolymer", t.max_homopolymer, "maximum homopolymer length");
    cmd->add_option("--max-heteroduplex", t.max_heteroduplex, "maximum heteroduplex length");
    cmd->add_option("--max-hairpin", t.max_hairpin, "maximum hairpin stem length");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"watermark DNA barcode construction, simulation and demultiplexing"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI file (flags take precedence)");

    BuildCli build_cli;
    auto* build = app.add_subcommand("build", "construct a barcode set and write it to a file");
    build->add_option("--q", build_cli.params.q, "field order (4, 8 or 16)")->required();
    build->add_option("--k", build_cli.params.k, "message length in field symbols")->required();
    build->add_option("--u", build_cli.params.u, "inner expansion length")->required();
    build->add_option("--l", build_cli.params.l, "barcode length in nucleotides")->required();
    build->add_option("--out", build_cli.out, "output barcode-set file")->required();
    build->add_option("--seed", build_cli.seed, "base seed for code, codebook and watermark")
        ->each([&](const std::string&) { build_cli.seed_set = true; });
    build->add_option("--code-seed", build_cli.params.code_seed, "outer code construction seed");
    build->add_option("--codebook-seed", build_cli.params.codebook_seed, "inner codebook search seed");
    build->add_option("--watermark-seed", build_cli.params.watermark_seed, "watermark search seed");
    build->add_option("--watermark", build_cli.watermark_mode, "watermark choice: ils or random")
        ->check(CLI::IsMember({"ils", "random"}));
    build->add_option("--ils-restarts", build_cli.params.ils.restarts, "perturbation rounds");
    build->add_option("--ils-perturbation", build_cli.params.ils.perturbation,
                      "bases changed per restart (0 = auto)");
    build->add_option("--codebook-restarts", build_cli.params.codebook_search.restarts,
                      "inner codebook search restarts");
    build->add_option("--codebook-samples", build_cli.params.codebook_search.samples_per_slot,
                      "samples per codebook slot");
    build->add_option("--flank", build_cli.params.flank, "left flanking sequence (12 nt typical)");
    build->add_option("--consensus", build_cli.params.consensus, "right consensus sequence (30 nt typical)");
    build->add_option("--mapping", build_cli.params.mapping, "symbol-to-base mapping, e.g. ACGT");
    build->add_option("--trace", build_cli.trace, "write the watermark search trace TSV here");
    add_threshold_flags(build, build_cli.params.thresholds);

    FilterCli filter_cli;
    auto* filter = app.add_subcommand("filter", "run the chemistry filter and write a rejection report");
    auto* filter_set_opt = filter->add_option("--set", filter_cli.set_path,
                                              "barcode-set file (re-filters all of its candidates)");
    filter->add_option("--fasta", filter_cli.fasta_path, "candidate sequences in FASTA")
        ->excludes(filter_set_opt);
    filter->add_option("--report", filter_cli.report_path, "rejection report TSV (default stdout)");
    filter->add_option("--survivors", filter_cli.survivors_path, "write surviving sequences as FASTA");
    filter->add_option("--flank", filter_cli.flank, "adapter-side flank for --fasta mode");
    filter->add_option("--consensus", filter_cli.consensus, "consensus sequence for --fasta mode");
    add_threshold_flags(filter, filter_cli.thresholds);

    SimulateCli simulate_cli;
    auto* simulate = app.add_subcommand("simulate", "transmit reads through the IDS channel");
    auto* simulate_set_opt =
        simulate->add_option("--set", simulate_cli.set_path, "generate flanked barcode reads from this set");
    simulate->add_option("--in", simulate_cli.in_path, "corrupt sequences from this FASTA/FASTQ instead")
        ->excludes(simulate_set_opt);
    simulate->add_option("--out", simulate_cli.out, "output reads file")->required();
    simulate->add_option("--format", simulate_cli.format, "fasta or fastq")
        ->check(CLI::IsMember({"fasta", "fastq"}));
    simulate->add_option("--n", simulate_cli.n, "number of reads (--set mode)");
    simulate->add_option("--seed", simulate_cli.seed, "simulation seed (recorded in headers)");
    simulate->add_option("--insert-len", simulate_cli.insert_len, "random insert length after the consensus");
    add_channel_flags(simulate, simulate_cli.params);

    DemuxCli demux_cli;
    auto* demux = app.add_subcommand("demux", "assign noisy reads to samples");
    demux->add_option("--set", demux_cli.set_path, "barcode-set file")->required();
    demux->add_option("--reads", demux_cli.reads_path, "FASTA/FASTQ reads")->required();
    demux->add_option("--out", demux_cli.out, "per-read TSV (default stdout)");
    demux->add_option("--summary", demux_cli.summary, "summary file (default stderr)");
    demux->add_option("--max-iters", demux_cli.options.max_iters, "BP iteration cap");
    demux->add_option("--threads", demux_cli.threads, "worker threads (0 = all)");
    demux->add_flag("--strict", demux_cli.strict, "abort on malformed records");
    demux->add_flag("--try-reverse-complement", demux_cli.options.try_reverse_complement,
                    "decode both orientations, keep the more likely");
    demux->add_flag("--uniform-boundaries", demux_cli.options.uniform_boundaries,
                    "disable context-aware boundary estimation");
    add_channel_flags(demux, demux_cli.params);

    EvalCli eval_cli;
    auto* eval = app.add_subcommand("eval", "Monte Carlo error-rate estimation");
    eval->add_option("--set", eval_cli.set_path, "barcode-set file")->required();
    eval->add_option("--n", eval_cli.n, "number of simulated reads");
    eval->add_option("--seed", eval_cli.seed, "experiment seed");
    eval->add_option("--max-iters", eval_cli.options.max_iters, "BP iteration cap");
    eval->add_option("--threads", eval_cli.options.threads, "worker threads (0 = all)");
    eval->add_option("--insert-len", eval_cli.options.insert_len, "random insert length");
    eval->add_option("--out", eval_cli.out, "report file (default stdout)");
    eval->add_option("--sweep", eval_cli.sweep, "noise sweep, e.g. pmut:0.01:0.15:8");
    eval->add_flag("--uniform-boundaries", eval_cli.options.uniform_boundaries,
                   "disable context-aware boundary estimation");
    add_channel_flags(eval, eval_cli.params);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        for (CLI::App* sub : app.get_subcommands()) {
            // Reproducibility: echo the effective configuration.
            std::cerr << "# effective config [" << sub->get_name() << "]\n" << sub->config_to_str(true, false);
            if (sub == build) {
                run_build(build_cli);
            } else if (sub == filter) {
                if (filter_cli.set_path.empty() && filter_cli.fasta_path.empty()) {
                    throw CLI::RequiredError("filter needs --set or --fasta");
                }
                run_filter(filter_cli);
            } else if (sub == simulate) {
                if (simulate_cli.set_path.empty() && simulate_cli.in_path.empty()) {
                    throw CLI::RequiredError("simulate needs --set or --in");
                }
                run_simulate(simulate_cli);
            } else if (sub == demux) {
                run_demux(demux_cli);
            } else if (sub == eval) {
                run_eval(eval_cli);
            }
        }
    } catch (const CLI::Error&) {
        std::cerr << "usage error; see --help\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}
