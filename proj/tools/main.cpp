// Command-line front end: consensus embeddings from multiple views, with
// subcommands for distance computation, fitting, parameter tuning, structure
// metrics, synthetic datasets, and SVG scatter plots.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "comds/baselines.hpp"
#include "comds/distances.hpp"
#include "comds/errors.hpp"
#include "comds/io.hpp"
#include "comds/metrics.hpp"
#include "comds/simulate.hpp"
#include "comds/solver.hpp"
#include "comds/stress.hpp"
#include "comds/tuning.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// input loading

struct LoadedView {
    std::string path;
    std::vector<std::string> ids;
    comds::DistanceMatrix distances;
    bool was_distances = false;
};

// A CSV "claims" to be a distance matrix when its header names exactly as
// many points as it has data rows and every row's first cell repeats the
// header id at that position. Structurally claiming files are read as
// distances and any validation problem is an error, not a fallback; anything
// else is read as an embedding. --input-format overrides the detection.
bool claims_distance_structure(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) return false; // let the real reader produce the error
    std::vector<std::vector<std::string>> cells;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == EOF) break;
        std::vector<std::string> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                row.push_back(line.substr(start));
                break;
            }
            row.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        cells.push_back(std::move(row));
    }
    while (!cells.empty() && cells.back().size() == 1 && cells.back()[0].empty()) {
        cells.pop_back();
    }
    if (cells.size() < 2) return false;
    const auto& header = cells[0];
    if (header.size() < 2 || header[0] != "id") return false;
    if (header.size() - 1 != cells.size() - 1) return false;
    for (std::size_t r = 1; r < cells.size(); ++r) {
        if (cells[r].empty() || cells[r][0] != header[r]) return false;
    }
    return true;
}

LoadedView load_view(const std::string& path, const std::string& format) {
    LoadedView view;
    view.path = path;
    bool as_distances = false;
    if (format == "distances") {
        as_distances = true;
    } else if (format == "embeddings") {
        as_distances = false;
    } else {
        as_distances = claims_distance_structure(path);
    }
    if (as_distances) {
        comds::NamedDistances nd = comds::read_distance_csv(path);
        view.ids = std::move(nd.ids);
        view.distances = std::move(nd.distances);
        view.was_distances = true;
    } else {
        comds::NamedMatrix nm = comds::read_embedding_csv(path);
        view.ids = std::move(nm.ids);
        view.distances = comds::pairwise_distances(nm.values);
    }
    return view;
}

void require_same_ids(const LoadedView& a, const LoadedView& b) {
    if (a.ids == b.ids) return;
    if (a.ids.size() != b.ids.size()) {
        throw comds::DataError("'" + b.path + "' has " + std::to_string(b.ids.size()) +
                               " samples but '" + a.path + "' has " +
                               std::to_string(a.ids.size()));
    }
    for (std::size_t i = 0; i < a.ids.size(); ++i) {
        if (a.ids[i] != b.ids[i]) {
            throw comds::DataError("sample ids of '" + b.path + "' do not match '" +
                                   a.path + "': position " + std::to_string(i + 1) +
                                   " is '" + b.ids[i] + "' vs '" + a.ids[i] + "'");
        }
    }
}

std::vector<LoadedView> load_views(const std::vector<std::string>& paths,
                                   const std::string& format) {
    std::vector<LoadedView> views;
    for (const auto& p : paths) {
        views.push_back(load_view(p, format));
        if (views.size() > 1) require_same_ids(views.front(), views.back());
    }
    return views;
}

// ---------------------------------------------------------------------------
// shared option plumbing

struct SolverFlags {
    int ndim = 2;
    double eps = 1e-6;
    int itmax = 300;
    std::string init = "torgerson";
    std::uint64_t seed = 0;
    int inner = 5;
    double ridge = 0.0;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
    cmd->add_option("--ndim", f.ndim, "Consensus dimension")->capture_default_str();
    cmd->add_option("--eps", f.eps, "Relative objective change for convergence")
        ->capture_default_str();
    cmd->add_option("--itmax", f.itmax, "Maximum outer iterations")->capture_default_str();
    cmd->add_option("--init", f.init, "Start configuration: torgerson | random")
        ->check(CLI::IsMember({"torgerson", "random"}))
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "Seed for random starts")->capture_default_str();
    cmd->add_option("--inner", f.inner, "Inner alternating passes per iteration")
        ->capture_default_str();
    cmd->add_option("--ridge", f.ridge, "Stabilizer added to the quadratic blocks")
        ->capture_default_str();
}

comds::SolverSettings to_settings(const SolverFlags& f) {
    comds::SolverSettings s;
    s.ndim = f.ndim;
    s.eps = f.eps;
    s.itmax = f.itmax;
    s.init = f.init == "random" ? comds::InitKind::RandomSeeded
                                : comds::InitKind::TorgersonAverage;
    s.seed = f.seed;
    s.als_inner_iters = f.inner;
    s.ridge = f.ridge;
    return s;
}

json settings_json(const SolverFlags& f) {
    json j;
    j["ndim"] = f.ndim;
    j["eps"] = f.eps;
    j["itmax"] = f.itmax;
    j["init"] = f.init;
    j["seed"] = f.seed;
    j["inner"] = f.inner;
    j["ridge"] = f.ridge;
    return j;
}

// ---------------------------------------------------------------------------
// output helpers

void write_consensus_csv(const std::string& path,
                         const std::vector<std::string>& ids,
                         const comds::Matrix& config) {
    comds::NamedMatrix out;
    out.ids = ids;
    for (int a = 0; a < config.cols(); ++a) {
        out.columns.push_back("dim" + std::to_string(a + 1));
    }
    out.values = config;
    comds::write_embedding_csv(path, out);
}

json fit_report(const comds::ConsensusFit& fit,
                const std::vector<LoadedView>& views, const SolverFlags& flags,
                const std::vector<comds::DistanceMatrix>& distances,
                const std::vector<comds::NeighborhoodMask>* masks) {
    json j;
    j["version"] = kVersion;
    j["method"] = fit.method == comds::Method::CoMDS ? "comds" : "locomds";
    j["n"] = fit.configuration.rows();
    j["ndim"] = fit.configuration.cols();
    j["settings"] = settings_json(flags);

    json inputs = json::array();
    for (const auto& v : views) {
        json one;
        one["path"] = v.path;
        one["format"] = v.was_distances ? "distances" : "embeddings";
        inputs.push_back(one);
    }
    j["inputs"] = inputs;

    if (fit.local_params) {
        json local;
        local["tau"] = fit.local_params->tau;
        local["percentile"] = fit.local_params->percentile;
        local["t"] = fit.local_params->t;
        j["local"] = local;
    }

    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["stress"] = fit.stress_trace.back();
    j["stress_trace"] = fit.stress_trace;

    std::vector<comds::NeighborhoodMask> empty;
    comds::Vector per_view =
        comds::stress_per_view(fit, distances, masks ? *masks : empty);
    comds::Vector per_point =
        comds::stress_per_point(fit, distances, masks ? *masks : empty);
    j["per_view_stress"] = std::vector<double>(per_view.data(),
                                               per_view.data() + per_view.size());
    j["per_point_stress"] = std::vector<double>(
        per_point.data(), per_point.data() + per_point.size());

    json weights = json::array();
    for (const auto& s : fit.scalings) {
        weights.push_back(std::vector<double>(s.weights.data(),
                                              s.weights.data() + s.weights.size()));
    }
    j["weights"] = weights;
    j["warnings"] = fit.warnings;
    return j;
}

// ---------------------------------------------------------------------------
// subcommand bodies

int cmd_distances(const std::string& input, const std::string& output) {
    comds::NamedMatrix m = comds::read_embedding_csv(input);
    comds::NamedDistances out;
    out.ids = m.ids;
    out.distances = comds::pairwise_distances(m.values);
    comds::write_distance_csv(output, out);
    std::cout << "wrote " << output << " (" << out.ids.size() << " points)\n";
    return 0;
}

struct FitArgs {
    std::vector<std::string> inputs;
    std::string input_format = "auto";
    std::string method = "comds";
    SolverFlags solver;
    double tau = 0.0;
    double percentile = 0.0;
    int knn = 0;
    std::string out_prefix = "comds_";
};

struct PreparedLocal {
    std::vector<comds::NeighborhoodMask> masks;
    std::vector<double> t;
};

PreparedLocal prepare_local(const FitArgs& args,
                            const std::vector<comds::DistanceMatrix>& distances) {
    PreparedLocal local;
    for (const auto& d : distances) {
        comds::NeighborhoodMask mask =
            args.knn > 0 ? comds::knn_mask(d, args.knn)
                         : comds::neighborhood_mask(d, args.percentile);
        const double pi = args.knn > 0 ? mask.percentile : args.percentile;
        local.t.push_back(comds::t_from_tau(args.tau, pi, d, mask));
        local.masks.push_back(std::move(mask));
    }
    return local;
}

int cmd_fit(const FitArgs& args) {
    std::vector<LoadedView> views = load_views(args.inputs, args.input_format);
    std::vector<comds::DistanceMatrix> distances;
    for (auto& v : views) distances.push_back(v.distances);

    comds::SolverSettings settings = to_settings(args.solver);
    comds::ConsensusFit fit;
    PreparedLocal local;
    const bool local_mode = args.method == "locomds";
    if (local_mode) {
        if (args.tau <= 0.0) {
            throw comds::DataError("locomds needs --tau > 0");
        }
        if (args.knn <= 0 && (args.percentile <= 0.0 || args.percentile >= 1.0)) {
            throw comds::DataError(
                "locomds needs --percentile in (0, 1) or --knn > 0");
        }
        local = prepare_local(args, distances);
        comds::LocalSpec spec;
        spec.masks = local.masks;
        spec.t = local.t;
        spec.tau = args.tau;
        fit = comds::fit(distances, settings, comds::Method::LoCoMDS, spec);
    } else {
        fit = comds::fit(distances, settings, comds::Method::CoMDS);
    }

    const std::string consensus_path = args.out_prefix + "consensus.csv";
    const std::string report_path = args.out_prefix + "report.json";
    write_consensus_csv(consensus_path, views.front().ids, fit.configuration);
    json report = fit_report(fit, views, args.solver, distances,
                             local_mode ? &local.masks : nullptr);
    comds::atomic_write_text(report_path, report.dump(2) + "\n");

    std::cout << "wrote " << consensus_path << " and " << report_path << "\n";
    for (const auto& w : fit.warnings) std::cout << "warning: " << w << "\n";
    return 0;
}

struct TuneArgs {
    std::vector<std::string> inputs;
    std::string input_format = "auto";
    std::string reference;
    std::string reference_format = "auto";
    SolverFlags solver;
    std::vector<double> taus;
    std::vector<double> percentiles;
    std::vector<int> k_values;
    bool truncate = false;
    int threads = 0;
    std::string out_prefix = "comds_";
};

int cmd_tune(const TuneArgs& args) {
    std::vector<LoadedView> views = load_views(args.inputs, args.input_format);
    std::vector<comds::DistanceMatrix> distances;
    for (auto& v : views) distances.push_back(v.distances);

    LoadedView reference = load_view(args.reference, args.reference_format);
    require_same_ids(views.front(), reference);

    comds::TuningGrid grid;
    if (!args.taus.empty()) grid.taus = args.taus;
    if (!args.percentiles.empty()) grid.percentiles = args.percentiles;
    if (!args.k_values.empty()) grid.k_values = args.k_values;

    comds::TuningOptions options;
    options.truncate_after_first_decrease = args.truncate;
    options.threads = args.threads;

    comds::SolverSettings settings = to_settings(args.solver);
    comds::TuningResult res =
        comds::tune(distances, reference.distances, grid, settings, options);

    json j;
    j["version"] = kVersion;
    j["taus"] = res.taus;
    j["percentiles"] = res.percentiles;
    j["k_values"] = res.k_values;
    j["scores"] = json::array();
    for (const auto& per_tau : res.scores) {
        json row = json::array();
        for (const auto& per_pi : per_tau) {
            json cell = json::array();
            for (double s : per_pi) {
                // -inf marks a failed cell; JSON has no literal for it.
                if (std::isfinite(s)) {
                    cell.push_back(s);
                } else {
                    cell.push_back(nullptr);
                }
            }
            row.push_back(cell);
        }
        j["scores"].push_back(row);
    }
    j["votes"] = res.votes;
    json selected;
    selected["tau"] = res.taus[static_cast<std::size_t>(res.selected_tau)];
    selected["percentile"] =
        res.percentiles[static_cast<std::size_t>(res.selected_percentile)];
    selected["tau_index"] = res.selected_tau;
    selected["percentile_index"] = res.selected_percentile;
    j["selected"] = selected;
    j["failed_cells"] = res.failed_cells;

    const std::string tuning_path = args.out_prefix + "tuning.json";
    comds::atomic_write_text(tuning_path, j.dump(2) + "\n");

    // Refit at the winning cell and emit the same outputs as `fit`.
    FitArgs fit_args;
    fit_args.inputs = args.inputs;
    fit_args.input_format = args.input_format;
    fit_args.method = "locomds";
    fit_args.solver = args.solver;
    fit_args.tau = res.taus[static_cast<std::size_t>(res.selected_tau)];
    fit_args.percentile =
        res.percentiles[static_cast<std::size_t>(res.selected_percentile)];
    fit_args.out_prefix = args.out_prefix;
    std::cout << "selected tau=" << fit_args.tau
              << " percentile=" << fit_args.percentile << "; wrote "
              << tuning_path << "\n";
    return cmd_fit(fit_args);
}

struct EvalArgs {
    std::string original;
    std::string original_format = "auto";
    std::string embedding;
    std::string embedding_format = "auto";
    std::vector<std::string> metrics{"random_triplet_accuracy",
                                     "spearman_distance_correlation",
                                     "lcmc_curve", "mantel"};
    int triplets_per_anchor = 20;
    long permutations = 0;
    std::uint64_t seed = 0;
    std::vector<int> k_values;
    std::string out = "metrics.json";
};

int cmd_eval(const EvalArgs& args) {
    LoadedView original = load_view(args.original, args.original_format);
    LoadedView embedding = load_view(args.embedding, args.embedding_format);
    require_same_ids(original, embedding);

    const std::set<std::string> wanted(args.metrics.begin(), args.metrics.end());
    const std::set<std::string> known{"random_triplet_accuracy",
                                      "spearman_distance_correlation",
                                      "lcmc_curve", "mantel"};
    for (const auto& name : wanted) {
        if (!known.count(name)) {
            throw comds::DataError("unknown metric '" + name + "'");
        }
    }

    json results;
    if (wanted.count("random_triplet_accuracy")) {
        results["random_triplet_accuracy"] = comds::random_triplet_accuracy(
            original.distances, embedding.distances, args.triplets_per_anchor,
            args.seed);
    }
    if (wanted.count("spearman_distance_correlation")) {
        results["spearman_distance_correlation"] =
            comds::spearman_distance_correlation(original.distances,
                                                 embedding.distances);
    }
    if (wanted.count("lcmc_curve")) {
        auto curve = comds::lcmc_curve(original.distances, embedding.distances,
                                       args.k_values);
        json curve_json;
        curve_json["k_values"] = json::array();
        curve_json["scores"] = json::array();
        for (const auto& [k, score] : curve) {
            curve_json["k_values"].push_back(k);
            curve_json["scores"].push_back(score);
        }
        results["lcmc_curve"] = curve_json;
    }
    if (wanted.count("mantel")) {
        comds::MantelResult mr = comds::mantel_statistic(
            original.distances, embedding.distances, args.permutations, args.seed);
        json mj;
        mj["r"] = mr.r;
        if (mr.p_value) {
            mj["p_value"] = *mr.p_value;
        } else {
            mj["p_value"] = nullptr;
        }
        results["mantel"] = mj;
    }

    json j;
    j["version"] = kVersion;
    j["original"] = args.original;
    j["embedding"] = args.embedding;
    j["n"] = original.ids.size();
    json params;
    params["triplets_per_anchor"] = args.triplets_per_anchor;
    params["permutations"] = args.permutations;
    params["seed"] = args.seed;
    params["k_values"] = args.k_values;
    j["parameters"] = params;
    j["metrics"] = results;
    comds::atomic_write_text(args.out, j.dump(2) + "\n");
    std::cout << "wrote " << args.out << "\n";
    return 0;
}

struct SimulateArgs {
    std::string dataset;
    std::uint64_t seed = 1;
    double noise = 0.1;
    std::string out_prefix = "sim_";
};

int cmd_simulate(const SimulateArgs& args) {
    if (args.dataset == "gaussian") {
        comds::GaussianMixtureData gm = comds::gen_gaussian_mixture(args.seed);
        comds::NamedMatrix data;
        comds::NamedMatrix labels;
        for (int i = 0; i < gm.data.rows(); ++i) {
            data.ids.push_back(std::to_string(i + 1));
        }
        labels.ids = data.ids;
        data.columns = {"x1", "x2", "x3"};
        data.values = gm.data;
        labels.columns = {"label"};
        labels.values.resize(static_cast<Eigen::Index>(gm.labels.size()), 1);
        for (std::size_t i = 0; i < gm.labels.size(); ++i) {
            labels.values(static_cast<Eigen::Index>(i), 0) = gm.labels[i];
        }
        comds::write_embedding_csv(args.out_prefix + "data.csv", data);
        comds::write_embedding_csv(args.out_prefix + "labels.csv", labels);
        std::cout << "wrote " << args.out_prefix << "data.csv and "
                  << args.out_prefix << "labels.csv\n";
    } else if (args.dataset == "swissroll") {
        comds::SwissRollData sr = comds::gen_swiss_roll(args.seed, args.noise);
        comds::NamedMatrix data;
        comds::NamedMatrix intrinsic;
        for (int i = 0; i < sr.data.rows(); ++i) {
            data.ids.push_back(std::to_string(i + 1));
        }
        intrinsic.ids = data.ids;
        data.columns = {"x1", "x2", "x3"};
        data.values = sr.data;
        intrinsic.columns = {"t", "u"};
        intrinsic.values = sr.intrinsic;
        comds::write_embedding_csv(args.out_prefix + "data.csv", data);
        comds::write_embedding_csv(args.out_prefix + "intrinsic.csv", intrinsic);
        std::cout << "wrote " << args.out_prefix << "data.csv and "
                  << args.out_prefix << "intrinsic.csv\n";
    } else {
        throw comds::DataError("unknown dataset '" + args.dataset +
                               "' (expected gaussian or swissroll)");
    }
    return 0;
}

struct PlotArgs {
    std::string input;
    std::string labels;
    std::string out = "plot.svg";
    int dim_x = 1;
    int dim_y = 2;
};

std::string svg_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int cmd_plot(const PlotArgs& args) {
    comds::NamedMatrix m = comds::read_embedding_csv(args.input);
    const int n = static_cast<int>(m.values.rows());
    const int p = static_cast<int>(m.values.cols());
    if (args.dim_x < 1 || args.dim_x > p || args.dim_y < 1 || args.dim_y > p) {
        throw comds::DataError("plot dimensions must lie in [1, " +
                               std::to_string(p) + "]");
    }

    std::vector<int> color_index(static_cast<std::size_t>(n), 0);
    int classes = 1;
    if (!args.labels.empty()) {
        comds::NamedMatrix lab = comds::read_embedding_csv(args.labels);
        if (lab.ids != m.ids) {
            throw comds::DataError("sample ids of '" + args.labels +
                                   "' do not match '" + args.input + "'");
        }
        std::map<double, int> seen;
        for (int i = 0; i < n; ++i) {
            const double value = lab.values(i, 0);
            auto [it, inserted] = seen.emplace(value, static_cast<int>(seen.size()));
            color_index[static_cast<std::size_t>(i)] = it->second;
            (void)inserted;
        }
        classes = static_cast<int>(seen.size());
    }
    static const char* kPalette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                                     "#66ccee", "#aa3377", "#bbbbbb", "#000000"};
    constexpr int kPaletteSize = 8;

    const comds::Vector x = m.values.col(args.dim_x - 1);
    const comds::Vector y = m.values.col(args.dim_y - 1);
    const double x0 = x.minCoeff(), x1 = x.maxCoeff();
    const double y0 = y.minCoeff(), y1 = y.maxCoeff();
    const double xspan = x1 > x0 ? x1 - x0 : 1.0;
    const double yspan = y1 > y0 ? y1 - y0 : 1.0;
    const double size = 640.0, margin = 40.0, inner = size - 2.0 * margin;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
        << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << " " << size
        << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << size << "\" height=\"" << size
        << "\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << inner
        << "\" height=\"" << inner
        << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    for (int i = 0; i < n; ++i) {
        const double px = margin + inner * (x(i) - x0) / xspan;
        // SVG's y axis points down; flip so larger values plot higher.
        const double py = margin + inner * (y1 - y(i)) / yspan;
        const char* color =
            kPalette[color_index[static_cast<std::size_t>(i)] % kPaletteSize];
        svg << "<circle cx=\"" << svg_num(px) << "\" cy=\"" << svg_num(py)
            << "\" r=\"3\" fill=\"" << color << "\" fill-opacity=\"0.75\"/>\n";
    }
    if (classes > 1) {
        for (int c = 0; c < classes; ++c) {
            const double ly = margin + 14.0 + 16.0 * c;
            svg << "<circle cx=\"" << svg_num(margin + 10.0) << "\" cy=\""
                << svg_num(ly) << "\" r=\"4\" fill=\"" << kPalette[c % kPaletteSize]
                << "\"/>\n";
            svg << "<text x=\"" << svg_num(margin + 20.0) << "\" y=\""
                << svg_num(ly + 4.0)
                << "\" font-family=\"sans-serif\" font-size=\"12\">class " << c + 1
                << "</text>\n";
        }
    }
    svg << "</svg>\n";
    comds::atomic_write_text(args.out, svg.str());
    std::cout << "wrote " << args.out << " (" << n << " points)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Consensus embeddings from multiple dimension reductions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // distances -------------------------------------------------------------
    std::string dist_input, dist_output = "distances.csv";
    CLI::App* distances = app.add_subcommand(
        "distances", "Pairwise Euclidean distances of an embedding CSV");
    distances->add_option("--input", dist_input, "Embedding CSV")->required();
    distances->add_option("--out", dist_output, "Output distance CSV")
        ->capture_default_str();

    // fit --------------------------------------------------------------------
    FitArgs fit_args;
    CLI::App* fit = app.add_subcommand("fit", "Fit a consensus embedding");
    fit->add_option("--input", fit_args.inputs,
                    "View CSVs (embeddings or distance matrices); repeatable")
        ->required();
    fit->add_option("--input-format", fit_args.input_format,
                    "Force how inputs are read")
        ->check(CLI::IsMember({"auto", "embeddings", "distances"}))
        ->capture_default_str();
    fit->add_option("--method", fit_args.method, "comds (global) | locomds (local)")
        ->check(CLI::IsMember({"comds", "locomds"}))
        ->capture_default_str();
    add_solver_flags(fit, fit_args.solver);
    fit->add_option("--tau", fit_args.tau, "Repulsion strength (locomds)");
    fit->add_option("--percentile", fit_args.percentile,
                    "Neighborhood distance percentile in (0, 1) (locomds)");
    fit->add_option("--knn", fit_args.knn,
                    "Use a k-nearest-neighbor mask instead of the percentile rule");
    fit->add_option("--out", fit_args.out_prefix,
                    "Output prefix for consensus.csv and report.json")
        ->capture_default_str();

    // tune -------------------------------------------------------------------
    TuneArgs tune_args;
    CLI::App* tune = app.add_subcommand(
        "tune", "Grid-search tau and percentile for the local method");
    tune->add_option("--input", tune_args.inputs,
                     "View CSVs (embeddings or distance matrices); repeatable")
        ->required();
    tune->add_option("--input-format", tune_args.input_format,
                     "Force how inputs are read")
        ->check(CLI::IsMember({"auto", "embeddings", "distances"}))
        ->capture_default_str();
    tune->add_option("--reference", tune_args.reference,
                     "Reference CSV scored against (original data or distances)")
        ->required();
    tune->add_option("--reference-format", tune_args.reference_format,
                     "Force how the reference is read")
        ->check(CLI::IsMember({"auto", "embeddings", "distances"}))
        ->capture_default_str();
    add_solver_flags(tune, tune_args.solver);
    tune->add_option("--taus", tune_args.taus, "Comma-separated tau grid")
        ->delimiter(',');
    tune->add_option("--percentiles", tune_args.percentiles,
                     "Comma-separated percentile grid")
        ->delimiter(',');
    tune->add_option("--k-values", tune_args.k_values,
                     "Comma-separated neighborhood sizes for scoring")
        ->delimiter(',');
    tune->add_flag("--truncate", tune_args.truncate,
                   "Drop k values past the first decline of the best score");
    tune->add_option("--threads", tune_args.threads,
                     "Concurrent cells (0 = COMDS_THREADS or hardware)")
        ->capture_default_str();
    tune->add_option("--out", tune_args.out_prefix,
                     "Output prefix for tuning.json, consensus.csv, report.json")
        ->capture_default_str();

    // eval -------------------------------------------------------------------
    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand(
        "eval", "Structure-preservation metrics of an embedding");
    eval->add_option("--original", eval_args.original,
                     "Original-space CSV (embedding or distances)")
        ->required();
    eval->add_option("--original-format", eval_args.original_format,
                     "Force how the original is read")
        ->check(CLI::IsMember({"auto", "embeddings", "distances"}))
        ->capture_default_str();
    eval->add_option("--embedding", eval_args.embedding,
                     "Embedding CSV (or distances) to evaluate")
        ->required();
    eval->add_option("--embedding-format", eval_args.embedding_format,
                     "Force how the embedding is read")
        ->check(CLI::IsMember({"auto", "embeddings", "distances"}))
        ->capture_default_str();
    eval->add_option("--metrics", eval_args.metrics,
                     "Subset of: random_triplet_accuracy, "
                     "spearman_distance_correlation, lcmc_curve, mantel")
        ->delimiter(',');
    eval->add_option("--triplets-per-anchor", eval_args.triplets_per_anchor,
                     "Sampled triplets per anchor point")
        ->capture_default_str();
    eval->add_option("--permutations", eval_args.permutations,
                     "Permutation count for the mantel p-value (0 = skip)")
        ->capture_default_str();
    eval->add_option("--seed", eval_args.seed, "Seed for sampled metrics")
        ->capture_default_str();
    eval->add_option("--k-values", eval_args.k_values,
                     "Comma-separated neighborhood sizes for the overlap curve")
        ->delimiter(',');
    eval->add_option("--out", eval_args.out, "Output JSON path")
        ->capture_default_str();

    // simulate ----------------------------------------------------------------
    SimulateArgs sim_args;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Generate a synthetic benchmark dataset");
    simulate->add_option("--dataset", sim_args.dataset, "gaussian | swissroll")
        ->required()
        ->check(CLI::IsMember({"gaussian", "swissroll"}));
    simulate->add_option("--seed", sim_args.seed, "Generator seed")
        ->capture_default_str();
    simulate->add_option("--noise", sim_args.noise,
                         "Ambient noise level (swissroll only)")
        ->capture_default_str();
    simulate->add_option("--out", sim_args.out_prefix, "Output prefix")
        ->capture_default_str();

    // plot ---------------------------------------------------------------------
    PlotArgs plot_args;
    CLI::App* plot = app.add_subcommand("plot", "SVG scatter of an embedding CSV");
    plot->add_option("--input", plot_args.input, "Embedding CSV")->required();
    plot->add_option("--labels", plot_args.labels,
                     "Optional labels CSV (id,label) for coloring");
    plot->add_option("--out", plot_args.out, "Output SVG path")
        ->capture_default_str();
    plot->add_option("--dim-x", plot_args.dim_x, "Column plotted on x (1-based)")
        ->capture_default_str();
    plot->add_option("--dim-y", plot_args.dim_y, "Column plotted on y (1-based)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
        if (distances->parsed()) return cmd_distances(dist_input, dist_output);
        if (fit->parsed()) return cmd_fit(fit_args);
        if (tune->parsed()) return cmd_tune(tune_args);
        if (eval->parsed()) return cmd_eval(eval_args);
        if (simulate->parsed()) return cmd_simulate(sim_args);
        if (plot->parsed()) return cmd_plot(plot_args);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const comds::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const comds::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 3;
    }
}
