// edgeperf: batch front end for the latency/precision modelling pipeline.
//
//   gen-data  synthetic measurement CSVs, one per transmission profile
//   fit       measurement CSV -> model file + residual report
//   predict   evaluate a model at (n, q) or over the whole domain
//   optimize  solve P1 or P2 for one threshold
//   pareto    sweep a threshold range
//   simulate  packet-level trace of one image exchange
//   compare   optimized vs vanilla model over a sweep
//
// Exit codes: 0 success (infeasible results included), 2 usage, 3 data/model.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "edgeperf/edgeperf.hpp"

namespace fs = std::filesystem;
using namespace edgeperf;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct Globals {
    std::string config_path;
    std::uint64_t seed = 42;
    bool seed_given = false;
    std::string out_dir = ".";
    std::string command_line;
};

class Session {
public:
    explicit Session(const Globals& g) : g_(g) {
        if (!g.config_path.empty()) {
            std::ifstream in(g.config_path);
            if (!in) throw Error("cannot open config file '" + g.config_path + "'");
            cfg_ = read_sim_config(in, g.config_path);
        }
        if (g.seed_given || g.config_path.empty()) cfg_.rng_seed = g.seed;
    }

    const SimConfig& config() const { return cfg_; }

    // Writes `body` under the output directory, preceded by the provenance header.
    fs::path write(const std::string& name, const std::string& body) const {
        fs::path dir(g_.out_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        fs::path path = dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write '" + path.string() + "'");
        out << "# edgeperf " << kVersion << '\n'
            << "# command: " << g_.command_line << '\n'
            << "# seed: " << cfg_.rng_seed << '\n'
            << body;
        if (!out) throw Error("failed writing '" + path.string() + "'");
        return path;
    }

private:
    const Globals& g_;
    SimConfig cfg_;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
}

SystemModel load_model(const std::string& path) {
    auto in = open_input(path);
    return read_system_model(in, path);
}

std::string prediction_header() {
    return "n,q,t_enc_ms,t_dec_ms,t_tx_ms,t_dl_ms,t_total_ms,fps,precision\n";
}

std::string prediction_row(int n, int q, const TotalEstimate& e) {
    std::ostringstream os;
    os << n << ',' << q << ',' << format_sig9(e.t_enc_ms) << ',' << format_sig9(e.t_dec_ms) << ','
       << format_sig9(e.t_tx_ms) << ',' << format_sig9(e.t_dl_ms) << ','
       << format_sig9(e.t_total_ms) << ',' << format_sig9(e.fps) << ','
       << format_sig9(e.precision) << '\n';
    return os.str();
}

// Threshold list for optimize/pareto/compare.
struct SweepOptions {
    std::string problem = "p1";
    std::vector<double> thresholds;
    std::optional<double> from, to, step;

    Problem parsed_problem() const {
        auto p = parse_problem(problem);
        if (!p) throw CLI::ValidationError("--problem", "expected p1 or p2, got '" + problem + "'");
        return *p;
    }

    std::vector<double> resolve() const {
        if (!thresholds.empty()) return thresholds;
        bool p1 = parsed_problem() == Problem::p1;
        return threshold_range(from.value_or(p1 ? 5.0 : 0.30), to.value_or(p1 ? 60.0 : 0.80),
                               step.value_or(p1 ? 1.0 : 0.01));
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--problem", problem, "p1 (max precision s.t. fps) or p2 (min latency s.t. precision)")
            ->check(CLI::IsMember({"p1", "p2"}));
        cmd->add_option("--thresholds", thresholds, "explicit threshold list")->delimiter(',');
        cmd->add_option("--from", from, "first threshold");
        cmd->add_option("--to", to, "last threshold (inclusive)");
        cmd->add_option("--step", step, "threshold spacing");
    }
};

std::string problem_tag(Problem p) { return std::string(to_string(p)); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latency/precision modelling and optimization for edge video offloading"};
    app.set_version_flag("--version", std::string("edgeperf ") + kVersion);
    app.require_subcommand(1);

    Globals g;
    for (int i = 1; i < argc; ++i) g.command_line += (i > 1 ? " " : "") + std::string(argv[i]);
    g.command_line = "edgeperf" + (g.command_line.empty() ? "" : " " + g.command_line);

    app.add_option("--config", g.config_path, "simulator config file (key = value)");
    auto* seed_opt = app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "generate synthetic measurement CSVs");
    std::vector<std::string> gen_profiles{"vanilla", "optimized"};
    int samples = 3;
    double noise_ms = 0.1, precision_noise = 0.005, gap_ms = 25.0;
    int q_step = 5;
    std::string truth_path;
    gen->add_option("--profiles", gen_profiles, "vanilla, optimized, tcp-nops, udp-ps")
        ->delimiter(',')
        ->capture_default_str();
    gen->add_option("--samples", samples, "samples per (n, q) cell")->check(CLI::PositiveNumber)->capture_default_str();
    gen->add_option("--noise-ms", noise_ms, "Gaussian sigma on each delay sample")->check(CLI::NonNegativeNumber)->capture_default_str();
    gen->add_option("--precision-noise", precision_noise, "Gaussian sigma on precision")->check(CLI::NonNegativeNumber)->capture_default_str();
    gen->add_option("--gap-ms", gap_ms, "idle gap before each image")->check(CLI::NonNegativeNumber)->capture_default_str();
    gen->add_option("--q-step", q_step, "encoding-rate spacing of the grid")->check(CLI::Range(1, 90))->capture_default_str();
    gen->add_option("--truth", truth_path, "draw every component, t_tx included, from this model file");

    // fit
    auto* fit = app.add_subcommand("fit", "fit a system model to measurement CSVs");
    std::vector<std::string> fit_inputs;
    fit->add_option("inputs", fit_inputs, "measurement CSV files, one profile each")->required();

    // predict
    auto* predict = app.add_subcommand("predict", "evaluate a model");
    std::string predict_model;
    std::optional<int> predict_n, predict_q;
    predict->add_option("--model", predict_model, "model file")->required();
    predict->add_option("--n", predict_n, "NN input size");
    predict->add_option("--q", predict_q, "encoding rate");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "solve P1 or P2 for one threshold");
    std::string opt_model;
    std::string opt_problem = "p1";
    double opt_threshold = 0.0;
    optimize->add_option("--model", opt_model, "model file")->required();
    optimize->add_option("--problem", opt_problem, "p1 or p2")->check(CLI::IsMember({"p1", "p2"}));
    optimize->add_option("--threshold", opt_threshold, "target fps (p1) or minimum precision (p2)")->required();

    // pareto
    auto* pareto = app.add_subcommand("pareto", "sweep a threshold range");
    std::string pareto_model;
    SweepOptions pareto_sweep_opts;
    pareto->add_option("--model", pareto_model, "model file")->required();
    pareto_sweep_opts.attach(pareto);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "packet-level trace of one image exchange");
    std::string sim_profile = "optimized";
    std::optional<std::int64_t> sim_bytes;
    std::optional<int> sim_q;
    double sim_gap = 25.0;
    simulate->add_option("--profile", sim_profile, "vanilla, optimized, tcp-nops, udp-ps")->capture_default_str();
    auto* bytes_opt = simulate->add_option("--bytes", sim_bytes, "image size in bytes");
    simulate->add_option("--q", sim_q, "encoding rate (size from the default curve)")->excludes(bytes_opt);
    simulate->add_option("--gap-ms", sim_gap, "idle gap before the image")->check(CLI::NonNegativeNumber)->capture_default_str();

    // compare
    auto* compare = app.add_subcommand("compare", "compare optimized and vanilla models");
    std::string cmp_opt, cmp_van;
    SweepOptions cmp_sweep;
    compare->add_option("--optimized", cmp_opt, "optimized-profile model file")->required();
    compare->add_option("--vanilla", cmp_van, "vanilla-profile model file")->required();
    cmp_sweep.attach(compare);

    try {
        app.parse(argc, argv);
        g.seed_given = seed_opt->count() > 0;
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
        Session session(g);
        const auto domain = DecisionDomain::standard();

        if (*gen) {
            std::optional<SystemModel> truth;
            if (!truth_path.empty()) truth = load_model(truth_path);
            auto spec = truth ? generator_from_model(*truth) : default_generator();
            spec.delay_noise_ms = noise_ms;
            spec.precision_noise = precision_noise;
            spec.inter_image_gap_ms = gap_ms;
            auto n_values = default_n_values();
            auto q_values = default_q_values(q_step);
            if (q_values.back() != kMaxEncodingRate) q_values.push_back(kMaxEncodingRate);
            for (const auto& name : gen_profiles) {
                auto profile = named_profile(name);
                if (!profile) throw CLI::ValidationError("--profiles", "unknown profile '" + name + "'");
                auto records = generate_records(session.config(), *profile, spec, n_values, q_values, samples);
                std::ostringstream os;
                write_measurements_csv(os, records);
                auto path = session.write("measurements_" + name + ".csv", os.str());
                std::cout << path.string() << ": " << records.size() << " records\n";
            }
        } else if (*fit) {
            for (const auto& input : fit_inputs) {
                auto in = open_input(input);
                auto grid = ingest(read_measurements_csv(in, input));
                auto sm = fit_system(grid);
                std::ostringstream model;
                write_system_model(model, sm);
                auto mpath = session.write("model_" + sm.profile_name + ".txt", model.str());
                const auto& r = sm.fit_report;
                std::ostringstream report;
                report << "component,unit,residual_rms\n"
                       << "t_enc,ms," << format_sig9(r.t_enc_rms) << '\n'
                       << "t_dec,ms," << format_sig9(r.t_dec_rms) << '\n'
                       << "t_tx,ms," << format_sig9(r.t_tx_rms) << '\n'
                       << "t_dl,ms," << format_sig9(r.t_dl_rms) << '\n'
                       << "precision,1," << format_sig9(r.precision_rms) << '\n';
                session.write("fit_report_" + sm.profile_name + ".csv", report.str());
                std::cout << mpath.string() << ": " << grid.size() << " cells\n" << report.str();
            }
        } else if (*predict) {
            auto sm = load_model(predict_model);
            std::string body = prediction_header();
            if (predict_n || predict_q) {
                if (!predict_n || !predict_q)
                    throw CLI::ValidationError("predict", "--n and --q must be given together");
                body += prediction_row(*predict_n, *predict_q, evaluate_total(sm, *predict_n, *predict_q));
            } else {
                for (int n : domain.n_values)
                    for (int q : domain.q_values) body += prediction_row(n, q, evaluate_total(sm, n, q));
            }
            session.write("predict_" + sm.profile_name + ".csv", body);
            if (predict_n) std::cout << body;
        } else if (*optimize) {
            auto sm = load_model(opt_model);
            auto problem = *parse_problem(opt_problem);
            auto result = solve(EvaluatedGrid(sm, domain), problem, opt_threshold);
            std::ostringstream os;
            std::vector<ParetoPoint> one{{opt_threshold, result}};
            write_sweep_csv(os, one);
            session.write("optimize_" + sm.profile_name + "_" + problem_tag(problem) + ".csv", os.str());
            std::cout << "feasible=" << (result.feasible() ? "true" : "false");
            if (result.point) {
                const auto& p = *result.point;
                std::cout << " n=" << p.n << " q=" << p.q << " precision=" << format_sig9(p.precision)
                          << " t_total_ms=" << format_sig9(p.t_total_ms) << " fps=" << format_sig9(p.fps);
            }
            std::cout << '\n';
        } else if (*pareto) {
            auto sm = load_model(pareto_model);
            auto problem = pareto_sweep_opts.parsed_problem();
            auto sweep = edgeperf::pareto_sweep(sm, domain, problem, pareto_sweep_opts.resolve());
            std::ostringstream os;
            write_sweep_csv(os, sweep);
            auto path = session.write("pareto_" + sm.profile_name + "_" + problem_tag(problem) + ".csv", os.str());
            std::cout << path.string() << ": " << sweep.size() << " thresholds\n";
        } else if (*simulate) {
            auto profile = named_profile(sim_profile);
            if (!profile) throw CLI::ValidationError("--profile", "unknown profile '" + sim_profile + "'");
            if (sim_q && !valid_encoding_rate(*sim_q))
                throw DomainViolation("q = " + std::to_string(*sim_q) + " outside [10, 100]");
            std::int64_t bytes = sim_bytes ? *sim_bytes : ImageSizeCurve{}(sim_q.value_or(25));
            auto r = simulate_exchange_detailed(bytes, *profile, session.config(), sim_gap);
            std::ostringstream os;
            write_trace_csv(os, r.trace);
            session.write("trace_" + sim_profile + ".csv", os.str());
            std::cout << "profile=" << sim_profile << " bytes=" << bytes
                      << " packets=" << packetize(bytes, profile->transport, session.config())
                      << " data_frames=" << r.trace.data_frames() << " ack_frames=" << r.trace.ack_frames()
                      << " t_tx_ms=" << format_sig9(r.t_tx_ms) << '\n';
        } else if (*compare) {
            auto opt = load_model(cmp_opt);
            auto van = load_model(cmp_van);
            auto problem = cmp_sweep.parsed_problem();
            auto rep = compare_profiles(opt, van, domain, {problem, cmp_sweep.resolve()});
            std::ostringstream csv, summary;
            write_comparison_csv(csv, rep);
            write_comparison_summary(summary, rep);
            session.write("compare_" + problem_tag(problem) + ".csv", csv.str());
            session.write("compare_" + problem_tag(problem) + "_summary.txt", summary.str());
            std::cout << summary.str();
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "edgeperf: " << e.what() << '\n';
        return kExitUsage;
    } catch (const RankDeficient& e) {
        std::cerr << "edgeperf: rank-deficient fit in component '" << e.component() << "': " << e.what()
                  << '\n';
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "edgeperf: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "edgeperf: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
