// nodalab command line: experiment runner around the library. Every numeric
// command writes content-addressed CSV/JSON artifacts plus a run manifest
// into the results directory; `replay <manifest>` re-executes a manifest and
// verifies the outputs byte for byte. Exit codes: 0 success, 1 usage or bad
// input, 2 work budget exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nodalab/derand.hpp"
#include "nodalab/eigenfunctions.hpp"
#include "nodalab/field_io.hpp"
#include "nodalab/gaussian_field.hpp"
#include "nodalab/io.hpp"
#include "nodalab/lattice.hpp"
#include "nodalab/nodal.hpp"
#include "nodalab/ns_constant.hpp"
#include "nodalab/svg.hpp"
#include "nodalab/threading.hpp"
#include "nodalab/version.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace nodalab;

namespace {

using ParamMap = std::map<std::string, std::string>;

struct Artifact {
    std::string name;       // logical name, e.g. "report"
    std::string extension;  // ".csv", ".jsonl", ".svg", ".txt"
    std::string content;
};

struct RunContext {
    int threads = 1;
    double budget = default_work_budget;
};

std::string get_s(const ParamMap& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument("missing parameter: " + key);
    return it->second;
}

std::string get_s(const ParamMap& p, const std::string& key, const std::string& dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}

long long get_ll(const ParamMap& p, const std::string& key) { return std::stoll(get_s(p, key)); }
long long get_ll(const ParamMap& p, const std::string& key, long long dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : std::stoll(it->second);
}
double get_d(const ParamMap& p, const std::string& key) { return parse_double(get_s(p, key)); }
double get_d(const ParamMap& p, const std::string& key, double dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : parse_double(it->second);
}

Vec2 parse_point(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("expected \"x,y\": " + s);
    return {parse_double(s.substr(0, comma)), parse_double(s.substr(comma + 1))};
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_double(item));
    return out;
}

// Field sources shared by the nodal commands: an eigenfunction spec from a
// file or flat construction, or the closed-form stripe/checkerboard fixtures.
struct FieldSource {
    std::vector<Wave> waves;
    double frequency_radius = 0.0;
    std::string id;
};

FieldSource resolve_field_source(const ParamMap& p) {
    FieldSource src;
    if (p.count("spec-file")) {
        auto spec = load_spec(get_s(p, "spec-file"));
        src.waves = spec_waves(spec);
        src.frequency_radius = std::sqrt(static_cast<double>(spec.e));
        src.id = "spec-file";
        return src;
    }
    if (p.count("flat")) {
        long long e = get_ll(p, "flat");
        auto spec = build_flat_random(e, static_cast<std::uint64_t>(get_ll(p, "seed", 1)));
        src.waves = spec_waves(spec);
        src.frequency_radius = std::sqrt(static_cast<double>(e));
        src.id = "flat-" + std::to_string(e);
        return src;
    }
    if (p.count("checkerboard")) {
        double m = get_d(p, "checkerboard");
        src.waves = {{{m, -m}, 1.0, 0.0}, {{m, m}, -1.0, 0.0}};  // 2 sin sin
        src.frequency_radius = m * std::sqrt(2.0);
        src.id = "checkerboard-m" + get_s(p, "checkerboard");
        return src;
    }
    if (p.count("stripe")) {
        double m = get_d(p, "stripe");
        src.waves = {{{m, 0.0}, std::sqrt(2.0), 0.0}};
        src.frequency_radius = m;
        src.id = "stripe-m" + get_s(p, "stripe");
        return src;
    }
    throw std::invalid_argument("no field source: pass --spec-file, --flat, --checkerboard or --stripe");
}

SpectralMeasure resolve_measure(const std::string& name, int k_arcs) {
    if (name == "nu") return measure_nu();
    if (name == "nu-tilde") return measure_nu_tilde();
    if (name == "lebesgue") return measure_lebesgue();
    if (name.rfind("spec:", 0) == 0) return spectral_measure(load_spec(name.substr(5)));
    (void)k_arcs;
    throw std::invalid_argument("unknown measure: " + name +
                                " (expected nu, nu-tilde, lebesgue or spec:<file>)");
}

// ---------------------------------------------------------------------------
// Command handlers. Each consumes a parameter map and returns artifacts, so
// the CLI path and manifest replay share one code path.

std::vector<Artifact> run_lattice(const ParamMap& p, const RunContext&) {
    long long e = get_ll(p, "E");
    if (e < 1) throw std::invalid_argument("E must be >= 1");
    if (e > max_supported_e) throw budget_error(static_cast<double>(e), max_supported_e);
    auto pts = lattice_points(e);
    std::string format = get_s(p, "format", "csv");

    std::string content;
    if (format == "json") {
        for (const auto& q : pts) {
            json row = {{"x", q.x}, {"y", q.y}, {"angle", frequency_angle(q)}};
            content += row.dump() + "\n";
        }
        return {{"points", ".jsonl", content}};
    }
    content = csv_row({"x", "y", "angle"});
    for (const auto& q : pts)
        content += csv_row({std::to_string(q.x), std::to_string(q.y),
                            format_double(frequency_angle(q))});
    return {{"points", ".csv", content}};
}

std::vector<Artifact> run_correlations(const ParamMap& p, const RunContext& ctx) {
    long long e = get_ll(p, "E");
    int len = static_cast<int>(get_ll(p, "len"));
    auto method = get_s(p, "method", "mitm") == "exhaustive" ? CorrelationMethod::exhaustive
                                                             : CorrelationMethod::meet_in_middle;
    auto rep = spectral_correlations(e, len, method, ctx.budget);
    std::string content = csv_row({"E", "len", "method", "total", "diagonal", "off_diagonal",
                                   "predicted_diagonal"});
    content += csv_row({std::to_string(rep.e), std::to_string(rep.tuple_len),
                        get_s(p, "method", "mitm"), std::to_string(rep.total_solutions),
                        std::to_string(rep.diagonal_solutions),
                        std::to_string(rep.off_diagonal_solutions),
                        std::to_string(rep.predicted_diagonal)});
    return {{"correlations", ".csv", content}};
}

std::vector<Artifact> run_quasi(const ParamMap& p, const RunContext& ctx) {
    long long e = get_ll(p, "E");
    int len = static_cast<int>(get_ll(p, "len"));
    auto rep = min_quasi_correlation(e, len, ctx.budget);
    std::string tuple;
    for (const auto& f : rep.attaining_tuple) {
        if (!tuple.empty()) tuple += ";";
        tuple += std::to_string(f.x) + ":" + std::to_string(f.y);
    }
    std::string content = csv_row({"E", "len", "min_norm", "min_norm2", "tuple"});
    content += csv_row({std::to_string(rep.e), std::to_string(rep.tuple_len),
                        format_double(rep.min_nonzero_norm), std::to_string(rep.min_norm2), tuple});
    return {{"quasi", ".csv", content}};
}

std::vector<Artifact> run_sprime(const ParamMap& p, const RunContext& ctx) {
    auto d = s_prime_diagnostic(get_ll(p, "E"), static_cast<int>(get_ll(p, "max-half-len", 2)),
                                get_d(p, "gamma", 0.5), get_d(p, "scale-exponent", 0.5), ctx.budget);
    std::string content = csv_row({"E", "N", "divisor_bound_ratio", "l", "total", "predicted",
                                   "off_diagonal_ratio", "leading_term_ratio", "min_quasi_norm",
                                   "quasi_ratio"});
    for (const auto& row : d.rows)
        content += csv_row({std::to_string(d.e), std::to_string(d.n),
                            format_double(d.divisor_bound_ratio), std::to_string(row.half_len),
                            std::to_string(row.total), std::to_string(row.predicted),
                            format_double(row.excess_ratio), format_double(row.leading_term_ratio),
                            format_double(row.min_quasi_norm), format_double(row.quasi_ratio)});
    return {{"sprime", ".csv", content}};
}

std::vector<Artifact> run_nodal_count(const ParamMap& p, const RunContext&) {
    FieldSource src = resolve_field_source(p);
    Vec2 center = parse_point(get_s(p, "center", "0.5,0.5"));
    double s = get_d(p, "s");
    double spacing = get_d(p, "spacing", faber_krahn_spacing(src.frequency_radius));
    Region region = Region::disc(center, s);
    SampledField f = sample_waves(src.waves, make_centered_grid(center, s, spacing));

    CountOptions opts;
    opts.with_length = true;
    auto waves = src.waves;
    opts.center_value = [waves](Vec2 q) { return waves_value(waves, q); };
    auto rep = count_nodal_domains(f, region, opts);

    std::string content = csv_row({"source", "center_x", "center_y", "s", "spacing",
                                   "domains_inside", "domains_touching", "nodal_length"});
    content += csv_row({src.id, format_double(center.x), format_double(center.y),
                        format_double(s), format_double(spacing),
                        std::to_string(rep.domains_inside),
                        std::to_string(rep.domains_touching_boundary),
                        format_double(rep.nodal_length)});
    std::vector<Artifact> artifacts{{"nodal-report", ".csv", content}};

    if (get_s(p, "plot", "0") == "1") {
        auto segments = nodal_segments(f, region);
        artifacts.push_back({"nodal-plot", ".svg", svg_nodal_plot(segments, center, s)});
    }
    if (get_s(p, "dump-segments", "0") == "1") {
        std::string seg;
        for (const auto& q : nodal_segments(f, region))
            seg += csv_row({format_double(q[0].x), format_double(q[0].y), format_double(q[1].x),
                            format_double(q[1].y)});
        artifacts.push_back({"segments", ".csv", seg});
    }
    return artifacts;
}

std::vector<Artifact> run_derand(const ParamMap& p, const RunContext& ctx) {
    long long e = get_ll(p, "E");
    std::uint64_t seed = static_cast<std::uint64_t>(get_ll(p, "seed", 1));
    auto spec = build_flat_random(e, seed);
    std::string mode = get_s(p, "mode", "b-moments");
    int k_param = static_cast<int>(get_ll(p, "K", 32));
    double delta = get_d(p, "delta", 1.0 / (static_cast<double>(k_param) * k_param));
    Vec2 center = parse_point(get_s(p, "center", "0.5,0.5"));
    double s = get_d(p, "s", std::pow(static_cast<double>(e), -0.4));
    (void)ctx;

    std::string content;
    if (mode == "b-moments") {
        ArcPartition arcs(k_param);
        auto heavy = heavy_arcs(spectral_measure(spec), k_param, delta);
        if (heavy.empty()) throw std::invalid_argument("no heavy arcs at this K and delta");
        long long n_samples = get_ll(p, "n-samples", 10000);
        // orders: tuples separated by ';', factors "arc:r:s" separated by ','
        std::string orders_text = get_s(p, "orders", "rep0:1:1");
        std::stringstream tuples(orders_text);
        std::string tuple_text;
        int tuple_index = 0;
        while (std::getline(tuples, tuple_text, ';')) {
            std::vector<ArcOrder> orders;
            std::stringstream factors(tuple_text);
            std::string factor;
            while (std::getline(factors, factor, ',')) {
                std::stringstream fs(factor);
                std::string arc_text, r_text, s_text;
                std::getline(fs, arc_text, ':');
                std::getline(fs, r_text, ':');
                std::getline(fs, s_text, ':');
                int arc;
                if (arc_text.rfind("rep", 0) == 0) {
                    // rep<i>: i-th heavy arc with midpoint angle in [0, pi)
                    int want = std::stoi(arc_text.substr(3));
                    int found = 0;
                    arc = -1;
                    for (int k : heavy) {
                        if (arcs.midpoint_angle(k) >= M_PI) continue;
                        if (found++ == want) {
                            arc = k;
                            break;
                        }
                    }
                    if (arc < 0) throw std::invalid_argument("not enough heavy representative arcs");
                } else {
                    arc = std::stoi(arc_text);
                }
                orders.push_back({arc, std::stoi(r_text), std::stoi(s_text)});
            }
            auto rep = moment_test_b(spec, arcs, orders, center, s, n_samples, seed + 17 + tuple_index);
            json row;
            row["tuple"] = tuple_text;
            row["empirical_re"] = rep.empirical.real();
            row["empirical_im"] = rep.empirical.imag();
            row["gaussian_re"] = rep.gaussian.real();
            row["gaussian_im"] = rep.gaussian.imag();
            row["deviation"] = rep.deviation;
            row["standard_error"] = rep.standard_error;
            row["n_samples"] = rep.n_samples;
            content += row.dump() + "\n";
            ++tuple_index;
        }
        return {{"b-moments", ".jsonl", content}};
    }
    if (mode == "f-moments") {
        int max_l = static_cast<int>(get_ll(p, "l-max", 2));
        auto rep = moment_test_f(spec, center, s, max_l);
        for (const auto& row : rep.rows) {
            json j;
            j["l"] = row.l;
            j["quadrature"] = row.quadrature;
            j["gaussian_target"] = row.gaussian_target;
            if (row.lattice_available) {
                j["lattice_sum"] = row.lattice_sum;
                j["constant_term"] = row.constant_term;
                j["oscillatory_term"] = row.oscillatory_term;
            }
            content += j.dump() + "\n";
        }
        return {{"f-moments", ".jsonl", content}};
    }
    if (mode == "c1") {
        double r_param = get_d(p, "R", 8.0);
        int n_centers = static_cast<int>(get_ll(p, "centers", 8));
        Rng rng(seed + 5);
        for (double kd : parse_list(get_s(p, "K-list", "8,16,32"))) {
            int kp = static_cast<int>(kd);
            ArcPartition arcs(kp);
            auto heavy = heavy_arcs(spectral_measure(spec), kp, 1.0 / (static_cast<double>(kp) * kp));
            Rng centers_rng(seed + 5);
            double acc = 0.0;
            for (int i = 0; i < n_centers; ++i) {
                Vec2 x{centers_rng.uniform01(), centers_rng.uniform01()};
                auto phi = phi_approx(spec, arcs, heavy, x, r_param);
                auto fx = restrict_to_ball(spec, x, r_param);
                acc += c1_distance(fx, phi, 1.0 / 16.0);
            }
            json j;
            j["K"] = kp;
            j["mean_c1_distance"] = acc / n_centers;
            j["R"] = r_param;
            content += j.dump() + "\n";
        }
        (void)rng;
        return {{"c1-refinement", ".jsonl", content}};
    }
    throw std::invalid_argument("unknown derand mode: " + mode);
}

std::vector<Artifact> run_ns_estimate(const ParamMap& p, const RunContext& ctx) {
    std::string measure_name = get_s(p, "measure");
    int k_arcs = static_cast<int>(get_ll(p, "K", 64));
    auto measure = resolve_measure(measure_name, k_arcs);
    int n = static_cast<int>(get_ll(p, "n", 200));
    std::uint64_t seed = static_cast<std::uint64_t>(get_ll(p, "seed", 1));
    double psi = get_d(p, "psi-amplitude", 0.0);
    CnsOptions opts;
    opts.threads = ctx.threads;

    std::string content = csv_row({"measure", "R", "n", "mean_count", "estimate", "std_error",
                                   "psi_amplitude", "perturbed_estimate", "relative_change"});
    std::vector<std::array<double, 3>> curve;
    for (double r_radius : parse_list(get_s(p, "R", "50"))) {
        if (psi != 0.0) {
            auto probe = stability_probe(measure, r_radius, psi, n, seed, k_arcs, opts);
            content += csv_row({measure_name, format_double(r_radius), std::to_string(n),
                                format_double(probe.base.mean_count),
                                format_double(probe.base.estimate),
                                format_double(probe.base.std_error), format_double(psi),
                                format_double(probe.perturbed.estimate),
                                format_double(probe.relative_change)});
            curve.push_back({r_radius, probe.base.estimate, probe.base.std_error});
        } else {
            auto est = estimate_cns(measure, r_radius, k_arcs, n, seed, opts);
            content += csv_row({measure_name, format_double(r_radius), std::to_string(n),
                                format_double(est.mean_count), format_double(est.estimate),
                                format_double(est.std_error), "0", "", ""});
            curve.push_back({r_radius, est.estimate, est.std_error});
        }
    }
    std::vector<Artifact> artifacts{{"ns-estimate", ".csv", content}};
    if (get_s(p, "plot", "0") == "1")
        artifacts.push_back({"ns-curve", ".svg",
                             svg_line_chart(curve, "nodal domain density vs R (" + measure_name + ")")});
    return artifacts;
}

std::vector<Artifact> run_local_law(const ParamMap& p, const RunContext& ctx) {
    CnsOptions opts;
    opts.threads = ctx.threads;
    auto rep = local_law_experiment(get_ll(p, "E"), static_cast<std::uint64_t>(get_ll(p, "seed", 1)),
                                    get_d(p, "s-exponent", -0.35),
                                    static_cast<int>(get_ll(p, "centers", 8)),
                                    get_d(p, "R", 50.0), static_cast<int>(get_ll(p, "K", 64)),
                                    static_cast<int>(get_ll(p, "n", 200)), opts);
    std::string content = csv_row({"E", "s", "center_x", "center_y", "count", "normalized_count",
                                   "ratio", "cns_estimate", "median_ratio"});
    for (std::size_t i = 0; i < rep.centers.size(); ++i)
        content += csv_row({std::to_string(rep.e), format_double(rep.s),
                            format_double(rep.centers[i].x), format_double(rep.centers[i].y),
                            format_double(rep.counts[i]), format_double(rep.normalized_counts[i]),
                            format_double(rep.ratios[i]), format_double(rep.cns.estimate),
                            format_double(rep.median_ratio)});
    return {{"local-law", ".csv", content}};
}

std::vector<Artifact> run_semi_locality(const ParamMap& p, const RunContext& ctx) {
    (void)ctx;
    EigenfunctionSpec spec = [&] {
        if (p.count("flat"))
            return build_flat_random(get_ll(p, "flat"),
                                     static_cast<std::uint64_t>(get_ll(p, "seed", 1)));
        long long m = get_ll(p, "checkerboard");
        return make_eigenfunction_spec(
            2 * m * m, {{Frequency{m, m}, {-0.5, 0.0}},
                        {Frequency{-m, -m}, {-0.5, 0.0}},
                        {Frequency{m, -m}, {0.5, 0.0}},
                        {Frequency{-m, m}, {0.5, 0.0}}});
    }();
    Vec2 center = parse_point(get_s(p, "center", "0.5,0.5"));
    double s = get_d(p, "s", 0.4);
    int n_centers = static_cast<int>(get_ll(p, "n-centers", 200));
    std::uint64_t seed = static_cast<std::uint64_t>(get_ll(p, "seed", 1));

    std::string content = csv_row({"E", "s", "R", "lhs", "rhs", "difference", "bound_scale",
                                   "fitted_constant", "n_centers"});
    for (double r_param : parse_list(get_s(p, "R", "8"))) {
        auto rep = semi_locality_check(spec, s, center, r_param, n_centers, seed);
        content += csv_row({std::to_string(rep.e), format_double(rep.s),
                            format_double(rep.r_parameter), format_double(rep.lhs),
                            format_double(rep.rhs), format_double(rep.difference),
                            format_double(rep.bound_scale), format_double(rep.fitted_constant),
                            std::to_string(rep.n_centers)});
    }
    return {{"semi-locality", ".csv", content}};
}

std::vector<Artifact> run_spec_dump(const ParamMap& p, const RunContext&) {
    auto spec = build_flat_random(get_ll(p, "E"), static_cast<std::uint64_t>(get_ll(p, "seed", 1)));
    std::ostringstream os;
    write_spec(spec, os);
    return {{"spec", ".txt", os.str()}};
}

std::vector<Artifact> run_field_dump(const ParamMap& p, const RunContext&) {
    auto measure = resolve_measure(get_s(p, "measure"), static_cast<int>(get_ll(p, "K", 64)));
    double radius = get_d(p, "radius", 10.0);
    double spacing = get_d(p, "spacing", 1.0 / 12.0);
    auto f = sample_field(measure, static_cast<int>(get_ll(p, "K", 64)),
                          Region::disc({0.0, 0.0}, radius), spacing,
                          static_cast<std::uint64_t>(get_ll(p, "seed", 1)),
                          get_s(p, "gradients", "0") == "1");
    std::ostringstream os;
    write_field(f, os);
    return {{"field", ".txt", os.str()}};
}

std::vector<Artifact> run_plot_field(const ParamMap& p, const RunContext&) {
    SampledField f = load_field(get_s(p, "field"));
    Vec2 center = parse_point(get_s(p, "center", "0,0"));
    double s = get_d(p, "s");
    auto segments = nodal_segments(f, Region::disc(center, s));
    return {{"nodal-plot", ".svg", svg_nodal_plot(segments, center, s)}};
}

using Handler = std::vector<Artifact> (*)(const ParamMap&, const RunContext&);

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table = {
        {"lattice", run_lattice},
        {"correlations", run_correlations},
        {"quasi", run_quasi},
        {"sprime", run_sprime},
        {"nodal-count", run_nodal_count},
        {"derand", run_derand},
        {"ns-estimate", run_ns_estimate},
        {"local-law", run_local_law},
        {"semi-locality", run_semi_locality},
        {"spec-dump", run_spec_dump},
        {"field-dump", run_field_dump},
        {"plot-field", run_plot_field},
    };
    return table;
}

// Writes artifacts content-addressed and the manifest describing them.
// Returns the manifest path.
std::string persist_run(const std::string& command, const ParamMap& params,
                        const std::vector<Artifact>& artifacts, const std::string& out_dir) {
    fs::create_directories(out_dir);
    json manifest;
    manifest["command"] = command;
    manifest["version"] = version_string;
    manifest["params"] = params;
    auto now = std::chrono::system_clock::now().time_since_epoch();
    manifest["timestamp_ns"] =
        std::chrono::duration_cast<std::chrono::nanoseconds>(now).count();
    json outputs = json::array();
    std::string combined;
    for (const auto& a : artifacts) {
        std::string hash = hash_hex(fnv1a_hash(a.content));
        std::string filename = command + "-" + a.name + "-" + hash + a.extension;
        fs::path path = fs::path(out_dir) / filename;
        if (!fs::exists(path)) write_file(path.string(), a.content);  // append-only store
        json entry;
        entry["name"] = a.name;
        entry["file"] = filename;
        entry["fnv64"] = hash;
        outputs.push_back(entry);
        combined += hash;
    }
    manifest["outputs"] = outputs;
    std::string manifest_name =
        command + "-" + hash_hex(fnv1a_hash(combined)) + ".manifest.json";
    fs::path manifest_path = fs::path(out_dir) / manifest_name;
    write_file(manifest_path.string(), manifest.dump(2) + "\n");
    return manifest_path.string();
}

int run_and_persist(const std::string& command, const ParamMap& params, const RunContext& ctx,
                    const std::string& out_dir) {
    auto it = handlers().find(command);
    if (it == handlers().end()) {
        std::cerr << "unknown command: " << command << "\n";
        return 1;
    }
    auto artifacts = it->second(params, ctx);
    std::string manifest = persist_run(command, params, artifacts, out_dir);
    std::cout << "manifest: " << manifest << "\n";
    for (const auto& a : artifacts) {
        std::istringstream preview(a.content);
        std::string line;
        int shown = 0;
        while (shown < 12 && std::getline(preview, line)) {
            std::cout << "  " << line << "\n";
            ++shown;
        }
        if (shown == 12) std::cout << "  ...\n";
    }
    return 0;
}

int run_replay(const std::string& manifest_path, const RunContext& ctx) {
    json manifest = json::parse(slurp_file(manifest_path));
    std::string command = manifest["command"];
    ParamMap params = manifest["params"].get<ParamMap>();
    auto it = handlers().find(command);
    if (it == handlers().end()) {
        std::cerr << "manifest names unknown command: " << command << "\n";
        return 1;
    }
    auto artifacts = it->second(params, ctx);
    bool identical = true;
    std::size_t idx = 0;
    for (const auto& entry : manifest["outputs"]) {
        if (idx >= artifacts.size()) {
            identical = false;
            break;
        }
        std::string hash = hash_hex(fnv1a_hash(artifacts[idx].content));
        if (hash != entry["fnv64"].get<std::string>()) identical = false;
        ++idx;
    }
    if (idx != artifacts.size()) identical = false;
    std::cout << (identical ? "replay: byte-identical outputs\n"
                            : "replay: OUTPUTS DIFFER from manifest\n");
    return identical ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nodalab: nodal statistics of toral eigenfunctions at small scales"};
    app.set_config("--config");
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);

    std::string out_dir = "results";
    RunContext ctx;
    ctx.threads = default_threads();
    app.add_option("--out-dir", out_dir, "results directory (append-only, content-addressed)");
    app.add_option("--threads", ctx.threads, "worker cap for parallel experiments");
    app.add_option("--budget", ctx.budget, "enumeration work ceiling (estimated ops)");

    // Every subcommand collects its flags into a string parameter map so the
    // manifest replay path can re-run it identically.
    ParamMap params;
    auto add_param_option = [&params](CLI::App* cmd, const std::string& flag,
                                      const std::string& help, bool required = false) {
        cmd->fallthrough();  // global flags may follow the subcommand
        auto* opt = cmd->add_option_function<std::string>(
            "--" + flag, [&params, flag](const std::string& v) { params[flag] = v; }, help);
        if (required) opt->required();
        return opt;
    };

    auto* lattice = app.add_subcommand("lattice", "lattice points on the circle |xi|^2 = E");
    lattice->add_option_function<std::string>(
        "E", [&params](const std::string& v) { params["E"] = v; }, "eigenvalue")->required();
    add_param_option(lattice, "format", "csv or json");
    lattice->add_flag_callback("--json", [&params] { params["format"] = "json"; },
                               "shorthand for --format json");
    lattice->add_flag_callback("--csv", [&params] { params["format"] = "csv"; },
                               "shorthand for --format csv");

    auto* correlations = app.add_subcommand("correlations", "zero-sum tuple counts S(l,E)");
    correlations->add_option_function<std::string>(
        "E", [&params](const std::string& v) { params["E"] = v; }, "eigenvalue")->required();
    add_param_option(correlations, "len", "tuple length (2, 3, 4 or 6)", true);
    add_param_option(correlations, "method", "exhaustive or mitm");

    auto* quasi = app.add_subcommand("quasi", "minimal nonzero l-fold sums");
    quasi->add_option_function<std::string>(
        "E", [&params](const std::string& v) { params["E"] = v; }, "eigenvalue")->required();
    add_param_option(quasi, "len", "tuple length (2, 4 or 6)", true);

    auto* sprime = app.add_subcommand("sprime", "arithmetic regularity diagnostic");
    sprime->add_option_function<std::string>(
        "E", [&params](const std::string& v) { params["E"] = v; }, "eigenvalue")->required();
    add_param_option(sprime, "max-half-len", "largest l for 2l-tuples");
    add_param_option(sprime, "gamma", "exponent in the excess normalisation");
    add_param_option(sprime, "scale-exponent", "exponent in the quasi-correlation ratio");

    auto* nodal = app.add_subcommand("nodal-count", "count nodal domains in a ball");
    for (const char* f : {"spec-file", "flat", "seed", "checkerboard", "stripe", "s", "center",
                          "spacing", "plot", "dump-segments"})
        add_param_option(nodal, f, "");
    nodal->get_option("--s")->required();

    auto* derand = app.add_subcommand("derand", "de-randomisation statistics");
    for (const char* f : {"E", "seed", "mode", "K", "delta", "s", "center", "n-samples", "orders",
                          "l-max", "R", "centers", "K-list"})
        add_param_option(derand, f, "");
    derand->get_option("--E")->required();

    auto* nsest = app.add_subcommand("ns-estimate", "nodal domain density of a spectral measure");
    for (const char* f : {"measure", "R", "K", "n", "seed", "psi-amplitude", "plot"})
        add_param_option(nsest, f, "");
    nsest->get_option("--measure")->required();

    auto* locallaw = app.add_subcommand("local-law", "local count law vs estimated constant");
    for (const char* f : {"E", "seed", "s-exponent", "centers", "R", "K", "n"})
        add_param_option(locallaw, f, "");
    locallaw->get_option("--E")->required();

    auto* semiloc = app.add_subcommand("semi-locality", "semi-local count decomposition");
    for (const char* f : {"flat", "checkerboard", "seed", "s", "center", "R", "n-centers"})
        add_param_option(semiloc, f, "");

    auto* specdump = app.add_subcommand("spec-dump", "write a flat random eigenfunction spec");
    for (const char* f : {"E", "seed"}) add_param_option(specdump, f, "");
    specdump->get_option("--E")->required();

    auto* fielddump = app.add_subcommand("field-dump", "sample and dump a Gaussian field grid");
    for (const char* f : {"measure", "K", "radius", "spacing", "seed", "gradients"})
        add_param_option(fielddump, f, "");
    fielddump->get_option("--measure")->required();

    auto* plotfield = app.add_subcommand("plot-field", "nodal-set plot of a dumped field");
    for (const char* f : {"field", "s", "center"}) add_param_option(plotfield, f, "");
    plotfield->get_option("--field")->required();
    plotfield->get_option("--s")->required();

    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "re-run a manifest and verify outputs");
    replay->fallthrough();
    replay->add_option("manifest", manifest_path, "manifest json path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (replay->parsed()) return run_replay(manifest_path, ctx);
        for (const auto& [name, handler] : handlers()) {
            (void)handler;
            auto* sub = app.get_subcommand(name);
            if (sub != nullptr && sub->parsed()) return run_and_persist(name, params, ctx, out_dir);
        }
        std::cerr << "no command given\n";
        return 1;
    } catch (const budget_error& err) {
        std::cerr << "budget exceeded: estimated " << err.estimated_ops << " ops > " << err.budget
                  << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
