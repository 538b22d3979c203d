// Batch front door: runs verification campaigns over the spectral toolkit and
// emits deterministic CSV/JSON tables.
//
// Exit codes: 0 pass, 2 config error, 3 partial/precision, 4 numeric failure,
// 5 verification failure.

#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fdspec/asymptotics.hpp>
#include <fdspec/birman_schwinger.hpp>
#include <fdspec/coherent.hpp>
#include <fdspec/errors.hpp>
#include <fdspec/io.hpp>
#include <fdspec/model.hpp>
#include <fdspec/quantization.hpp>
#include <fdspec/spectrum.hpp>
#include <fdspec/version.hpp>

namespace {

using namespace fdspec;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitVerification = 5;

struct Options {
    std::string family = "zeta";
    double b = 1.0;
    double zeta = 1.0;
    int m = 1;
    int n = 1;
    std::string backend = "osc";
    int want = 10;
    double tol = 1e-8;
    std::string lambda_grid;
    std::string t_grid = "0.5:0.005:14";
    double a = kTwoPi;
    std::string out;
    std::string format = "csv";
    unsigned long long seed = 42;
    std::string config_path;
    // command-specific extras
    int nodes = 400;
    int trials = 20;
    std::string spectrum_file;
    std::string riesz_file;
    std::string symbol = "volume";
};

ModelParams make_params(const Options& o) {
    if (o.family == "zeta") return ModelParams::zeta_family(o.b, o.zeta);
    if (o.family == "mn") return ModelParams::mn_family(o.b, o.m, o.n);
    throw ParamError("--family must be zeta or mn");
}

std::vector<double> parse_log_grid(const std::string& text, const char* flag) {
    // lo:hi:steps, log-spaced inclusive; a bare number means a single point.
    std::vector<double> parts;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ':')) {
        try {
            size_t used = 0;
            parts.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw ParamError(std::string(flag) + ": cannot parse '" + token + "'");
        }
    }
    if (parts.size() == 1) return {parts[0]};
    if (parts.size() != 3) throw ParamError(std::string(flag) + ": expected lo:hi:steps");
    double lo = parts[0], hi = parts[1];
    int steps = static_cast<int>(parts[2]);
    if (steps < 1 || static_cast<double>(steps) != parts[2])
        throw ParamError(std::string(flag) + ": steps must be a positive integer");
    if (!(lo > 0.0) || !(hi > 0.0))
        throw ParamError(std::string(flag) + ": log grid endpoints must be positive");
    if (steps == 1) return {lo};
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i)
        grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (steps - 1));
    return grid;
}

std::string canonical_config(const Options& o, const std::string& command) {
    std::ostringstream os;
    os << "command=" << command << ";family=" << o.family << ";b=" << io::format_double(o.b)
       << ";zeta=" << io::format_double(o.zeta) << ";m=" << o.m << ";n=" << o.n
       << ";backend=" << o.backend << ";want=" << o.want << ";tol=" << io::format_double(o.tol)
       << ";lambda-grid=" << o.lambda_grid << ";t-grid=" << o.t_grid
       << ";a=" << io::format_double(o.a) << ";format=" << o.format << ";seed=" << o.seed
       << ";nodes=" << o.nodes << ";trials=" << o.trials << ";symbol=" << o.symbol
       << ";spectrum-file=" << o.spectrum_file << ";riesz-file=" << o.riesz_file;
    return os.str();
}

std::vector<std::string> standard_header(const Options& o, const std::string& command) {
    std::string cfg = canonical_config(o, command);
    return {
        "tool: fdspec " + std::string(kVersion),
        "params: " + cfg,
        "config-hash: " + io::fnv1a_hex(cfg),
    };
}

std::string csv_table(const std::vector<std::string>& header_comments,
                      const std::string& header_row,
                      const std::vector<std::string>& rows) {
    std::ostringstream os;
    for (const auto& h : header_comments) os << "# " << h << "\r\n";
    os << header_row << "\r\n";
    for (const auto& r : rows) os << r << "\r\n";
    return os.str();
}

json json_meta(const Options& o, const std::string& command) {
    std::string cfg = canonical_config(o, command);
    return json{{"tool", "fdspec " + std::string(kVersion)},
                {"params", cfg},
                {"config_hash", io::fnv1a_hex(cfg)}};
}

void emit(const Options& o, const std::string& content) {
    if (o.out.empty())
        std::cout << content;
    else
        io::atomic_write_text(o.out, content);
}

Backend parse_backend_single(const std::string& s) {
    if (s == "osc") return Backend::Oscillator;
    if (s == "grid") return Backend::Grid;
    throw ParamError("--backend must be osc, grid, or both");
}

int ladder_want_for(const ModelParams& params, double lambda_max, int floor_want) {
    // Enough eigenvalues that the trusted range covers lambda_max.
    double A = leading_coefficient(params);
    double L = std::log(std::max(lambda_max, 3.0));
    return std::max(floor_want, static_cast<int>(A * L * L) + 5);
}

// --- spectrum -------------------------------------------------------------

int cmd_spectrum(const Options& o) {
    ModelParams params = make_params(o);
    auto header = standard_header(o, "spectrum");

    if (params.family == Family::Zeta && params.zeta == 0.0) {
        // Purely absolutely continuous spectrum on [2, inf): nothing to list.
        header.push_back(
            "warning: zeta = 0 has no discrete spectrum; no eigenvalues emitted");
        if (o.format == "json") {
            json out{{"meta", json_meta(o, "spectrum")},
                     {"warnings", {"zeta = 0 has no discrete spectrum"}},
                     {"eigenvalues", json::array()}};
            emit(o, out.dump(2) + "\n");
        } else {
            emit(o, csv_table(header, "index,eigenvalue,certificate", {}));
        }
        std::cerr << "warning: zeta = 0 has no discrete spectrum\n";
        return kExitPartial;
    }

    LadderOptions ladder;
    ladder.a = o.a;
    std::vector<SpectrumResult> specs;
    if (o.backend == "both") {
        specs.push_back(converged_spectrum(params, Backend::Oscillator, o.want, o.tol, ladder));
        specs.push_back(converged_spectrum(params, Backend::Grid, o.want, o.tol, ladder));
    } else {
        specs.push_back(
            converged_spectrum(params, parse_backend_single(o.backend), o.want, o.tol, ladder));
    }
    for (auto& s : specs) {
        for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
        // Report exactly the requested eigenvalues.
        if (s.eigenvalues.size() > static_cast<size_t>(o.want))
            s.eigenvalues.resize(o.want);
        if (s.certificates.size() > s.eigenvalues.size())
            s.certificates.resize(s.eigenvalues.size());
    }

    bool partial = false;
    for (const auto& s : specs) partial = partial || s.partial;

    if (o.backend == "both") {
        const auto& so = specs[0];
        const auto& sg = specs[1];
        if (o.format == "json") {
            json out{{"meta", json_meta(o, "spectrum")},
                     {"oscillator", json::parse(spectrum_to_json(so))},
                     {"grid", json::parse(spectrum_to_json(sg))}};
            emit(o, out.dump(2) + "\n");
        } else {
            std::vector<std::string> rows;
            size_t count = std::min({so.eigenvalues.size(), sg.eigenvalues.size(),
                                     static_cast<size_t>(o.want)});
            for (size_t i = 0; i < count; ++i) {
                double rel = std::abs(so.eigenvalues[i] - sg.eigenvalues[i]) /
                             std::abs(so.eigenvalues[i]);
                rows.push_back(std::to_string(i + 1) + "," +
                               io::format_double(so.eigenvalues[i]) + "," +
                               io::format_double(sg.eigenvalues[i]) + "," +
                               io::format_double(rel));
            }
            emit(o, csv_table(header, "index,eigenvalue_osc,eigenvalue_grid,rel_diff", rows));
        }
    } else if (o.format == "json") {
        json out{{"meta", json_meta(o, "spectrum")},
                 {"spectrum", json::parse(spectrum_to_json(specs[0]))}};
        emit(o, out.dump(2) + "\n");
    } else {
        emit(o, spectrum_to_csv(specs[0], header));
    }
    return partial ? kExitPartial : kExitPass;
}

// --- sandwich ---------------------------------------------------------------

SpectrumResult read_spectrum_csv(const std::string& path, const ModelParams& params) {
    std::ifstream in(path);
    if (!in) throw ParamError("cannot open spectrum file: " + path);
    SpectrumResult s;
    s.params = params;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("index,", 0) == 0) continue;
        std::istringstream row(line);
        std::string idx, ev, cert;
        std::getline(row, idx, ',');
        std::getline(row, ev, ',');
        std::getline(row, cert, ',');
        try {
            s.eigenvalues.push_back(std::stod(ev));
        } catch (const std::exception&) {
            throw ParamError("spectrum file: cannot parse eigenvalue '" + ev + "'");
        }
        if (!cert.empty()) {
            s.certificates.push_back(std::stod(cert));
            s.certified_count = static_cast<int>(s.certificates.size());
        }
    }
    if (s.eigenvalues.empty()) throw ParamError("spectrum file has no rows");
    while (s.certificates.size() < s.eigenvalues.size()) s.certificates.push_back(0.0);
    return s;
}

int cmd_sandwich(const Options& o) {
    ModelParams params = make_params(o);
    std::vector<double> grid =
        parse_log_grid(o.lambda_grid.empty() ? "10:100:3" : o.lambda_grid, "--lambda-grid");
    CoherentFrame frame = coherent_constants(params, o.a);

    SpectrumResult spec;
    if (!o.spectrum_file.empty()) {
        spec = read_spectrum_csv(o.spectrum_file, params);
    } else {
        double lam_max = *std::max_element(grid.begin(), grid.end());
        LadderOptions ladder;
        ladder.a = o.a;
        int want = ladder_want_for(params, lam_max, o.want);
        spec = converged_spectrum(params, parse_backend_single(
                                              o.backend == "both" ? "osc" : o.backend),
                                  want, o.tol, ladder);
        for (const auto& w : spec.warnings) std::cerr << "warning: " << w << "\n";
    }

    SandwichReport rep = sandwich_check(spec, frame, grid);
    std::vector<std::string> rows;
    json jrows = json::array();
    for (const auto& r : rep.rows) {
        rows.push_back(io::format_double(r.lambda) + "," + io::format_double(r.lower) + "," +
                       io::format_double(r.riesz) + "," + io::format_double(r.upper) + "," +
                       io::format_double(r.budget) + "," + (r.pass ? "pass" : "fail"));
        jrows.push_back({{"lambda", r.lambda},
                         {"lower", r.lower},
                         {"riesz", r.riesz},
                         {"upper", r.upper},
                         {"budget", r.budget},
                         {"pass", r.pass}});
    }
    if (o.format == "json")
        emit(o, json{{"meta", json_meta(o, "sandwich")},
                     {"rows", jrows},
                     {"all_pass", rep.all_pass}}
                    .dump(2) +
                    "\n");
    else
        emit(o, csv_table(standard_header(o, "sandwich"),
                          "lambda,lower,riesz,upper,budget,verdict", rows));
    return rep.all_pass ? kExitPass : kExitVerification;
}

// --- weyl -------------------------------------------------------------------

int cmd_weyl(const Options& o) {
    ModelParams params = make_params(o);
    WeylFit fit;
    if (!o.riesz_file.empty()) {
        std::ifstream in(o.riesz_file);
        if (!in) throw ParamError("cannot open riesz file: " + o.riesz_file);
        std::vector<std::pair<double, double>> samples;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#' || line.rfind("lambda,", 0) == 0) continue;
            std::istringstream row(line);
            std::string lam, val;
            std::getline(row, lam, ',');
            std::getline(row, val, ',');
            samples.emplace_back(std::stod(lam), std::stod(val));
        }
        fit = weyl_fit_samples(samples);
    } else {
        std::vector<double> window =
            parse_log_grid(o.lambda_grid.empty() ? "50:0:0" : o.lambda_grid, "--lambda-grid");
        double lo = window.front();
        double hi = window.size() > 1 ? window.back() : 0.0;
        if (!(lo >= std::exp(1.0)))
            throw ParamError("--lambda-grid: weyl fit window must start at lambda >= e");
        int points = static_cast<int>(window.size()) >= 30 ? static_cast<int>(window.size()) : 60;
        LadderOptions ladder;
        ladder.a = o.a;
        SpectrumResult spec = converged_spectrum(
            params, parse_backend_single(o.backend == "both" ? "osc" : o.backend),
            std::max(o.want, 120), o.tol, ladder);
        for (const auto& w : spec.warnings) std::cerr << "warning: " << w << "\n";
        if (!(hi > lo)) hi = trusted_lambda(spec); // open-ended window: use trusted range
        fit = weyl_fit(spec, lo, hi, points);
    }
    double predicted = leading_coefficient(params);
    double deviation = std::abs(fit.A - predicted) / predicted;
    if (o.format == "json") {
        emit(o, json{{"meta", json_meta(o, "weyl")},
                     {"A", fit.A},
                     {"B", fit.B},
                     {"C", fit.C},
                     {"predicted_A", predicted},
                     {"rel_deviation", deviation},
                     {"residual", fit.residual},
                     {"lambda_lo", fit.lambda_lo},
                     {"lambda_hi", fit.lambda_hi}}
                    .dump(2) +
                    "\n");
    } else {
        std::vector<std::string> rows{
            io::format_double(fit.A) + "," + io::format_double(fit.B) + "," +
            io::format_double(fit.C) + "," + io::format_double(predicted) + "," +
            io::format_double(deviation) + "," + io::format_double(fit.residual) + "," +
            io::format_double(fit.lambda_lo) + "," + io::format_double(fit.lambda_hi)};
        emit(o, csv_table(standard_header(o, "weyl"),
                          "A,B,C,predicted_A,rel_deviation,residual,lambda_lo,lambda_hi",
                          rows));
    }
    return kExitPass;
}

// --- heat -------------------------------------------------------------------

int cmd_heat(const Options& o) {
    ModelParams params = make_params(o);
    std::vector<double> tg = parse_log_grid(o.t_grid, "--t-grid");
    for (double t : tg)
        if (!(t > 0.0)) throw ParamError("--t-grid: t must be positive");

    SpectrumResult spec;
    if (!o.spectrum_file.empty()) {
        spec = read_spectrum_csv(o.spectrum_file, params);
    } else {
        LadderOptions ladder;
        ladder.a = o.a;
        spec = converged_spectrum(params,
                                  parse_backend_single(o.backend == "both" ? "osc" : o.backend),
                                  std::max(o.want, 120), o.tol, ladder);
        for (const auto& w : spec.warnings) std::cerr << "warning: " << w << "\n";
    }

    KaramataReport rep = karamata_check(spec, tg);
    std::vector<std::string> rows;
    json jrows = json::array();
    bool any_flagged = false;
    for (const auto& r : rep.rows) {
        if (!r.usable) any_flagged = true;
        rows.push_back(io::format_double(r.t) + "," + io::format_double(r.ratio) + "," +
                       io::format_double(r.tail_fraction) + "," +
                       (r.usable ? "ok" : "tail-dominated"));
        jrows.push_back({{"t", r.t},
                         {"ratio", r.ratio},
                         {"tail_fraction", r.tail_fraction},
                         {"usable", r.usable}});
    }
    if (o.format == "json")
        emit(o, json{{"meta", json_meta(o, "heat")},
                     {"rows", jrows},
                     {"monotone_trend", rep.monotone_trend},
                     {"last_within_band", rep.last_within_band},
                     {"smallest_usable_t", rep.smallest_usable_t}}
                    .dump(2) +
                    "\n");
    else
        emit(o, csv_table(standard_header(o, "heat"), "t,ratio,tail_fraction,flag", rows));
    return any_flagged ? kExitPartial : kExitPass;
}

// --- bs ---------------------------------------------------------------------

int cmd_bs(const Options& o) {
    if (o.nodes < 8) throw ParamError("--nodes must be >= 8");
    ModelParams params = make_params(o);
    std::vector<double> grid =
        parse_log_grid(o.lambda_grid.empty() ? "5:20:3" : o.lambda_grid, "--lambda-grid");
    double lam_max = *std::max_element(grid.begin(), grid.end());
    LadderOptions ladder;
    ladder.a = o.a;
    SpectrumResult spec = converged_spectrum(
        params, parse_backend_single(o.backend == "both" ? "osc" : o.backend),
        ladder_want_for(params, lam_max, o.want), o.tol, ladder);
    for (const auto& w : spec.warnings) std::cerr << "warning: " << w << "\n";

    std::vector<std::string> rows;
    json jrows = json::array();
    bool all_pass = true;
    for (double lam : grid) {
        BsCountRow r = bs_counting_check(params, lam, spec, o.nodes);
        all_pass = all_pass && r.pass;
        rows.push_back(io::format_double(r.lambda) + "," + std::to_string(r.n_spec) + "," +
                       std::to_string(r.bs_count) + "," + (r.pass ? "pass" : "fail"));
        jrows.push_back({{"lambda", r.lambda},
                         {"n_spec", r.n_spec},
                         {"bs_count", r.bs_count},
                         {"pass", r.pass}});
    }
    if (o.format == "json")
        emit(o, json{{"meta", json_meta(o, "bs")}, {"rows", jrows}, {"all_pass", all_pass}}
                    .dump(2) +
                    "\n");
    else
        emit(o, csv_table(standard_header(o, "bs"), "lambda,N_spec,bs_count,verdict", rows));
    return all_pass ? kExitPass : kExitVerification;
}

// --- coherent-check ----------------------------------------------------------

int cmd_coherent_check(const Options& o) {
    ModelParams params = make_params(o);
    CoherentFrame frame = coherent_constants(params, o.a);
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    const int J = 6;
    OscillatorBasisSpec basis;
    basis.size = J;
    basis.omega = kTwoPi;
    basis.center = default_center(params);
    OperatorMatrix M = build_matrix_oscillator(params, basis);

    std::vector<std::string> rows;
    json jrows = json::array();
    bool all_pass = true;
    auto push = [&](int trial, const char* check, double lhs, double rhs, bool pass) {
        all_pass = all_pass && pass;
        double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
        rows.push_back(std::to_string(trial) + "," + check + "," + io::format_double(lhs) +
                       "," + io::format_double(rhs) + "," + io::format_double(rel) + "," +
                       (pass ? "pass" : "fail"));
        jrows.push_back({{"trial", trial}, {"check", check}, {"lhs", lhs}, {"rhs", rhs},
                         {"rel", rel}, {"pass", pass}});
    };

    // Trial 0: the zero function (vacuous identities).
    {
        TestFunction zero;
        zero.basis = basis;
        zero.coeffs = Eigen::VectorXcd::Zero(J);
        PlancherelResult pl = plancherel_check(zero, frame);
        push(0, "plancherel", pl.lhs, pl.rhs, pl.pass);
    }
    for (int trial = 1; trial <= o.trials; ++trial) {
        TestFunction tf;
        tf.basis = basis;
        tf.coeffs = Eigen::VectorXcd(J);
        for (int i = 0; i < J; ++i)
            tf.coeffs(i) = std::complex<double>(gauss(rng), gauss(rng));
        tf.coeffs /= std::sqrt(tf.norm_squared());

        PlancherelResult pl = plancherel_check(tf, frame);
        push(trial, "plancherel", pl.lhs, pl.rhs, pl.pass);

        double direct = (tf.coeffs.adjoint() * M.entries * tf.coeffs)(0).real();
        double ps = quadratic_form_phase_space(tf, params, frame);
        bool qpass = std::abs(ps - direct) <= 1e-6 * std::abs(direct);
        push(trial, "quadratic-form", ps, direct, qpass);

        PhasePoint p{unif(rng), unif(rng)};
        LowerSymbolCheck ls = lower_symbol_direct(params, frame, p);
        push(trial, "lower-symbol", ls.quadrature, ls.closed_form, ls.pass);
    }

    if (o.format == "json")
        emit(o, json{{"meta", json_meta(o, "coherent-check")},
                     {"rows", jrows},
                     {"all_pass", all_pass}}
                    .dump(2) +
                    "\n");
    else
        emit(o, csv_table(standard_header(o, "coherent-check"),
                          "trial,check,lhs,rhs,rel,verdict", rows));
    return all_pass ? kExitPass : kExitVerification;
}

// --- volume -------------------------------------------------------------------

int cmd_volume(const Options& o) {
    ModelParams params = make_params(o);
    CoherentFrame frame = coherent_constants(params, o.a);
    std::vector<double> grid =
        parse_log_grid(o.lambda_grid.empty() ? "10:1000:5" : o.lambda_grid, "--lambda-grid");
    SymbolVariant variant;
    if (o.symbol == "upper") variant = SymbolVariant::UpperSymbol;
    else if (o.symbol == "lower") variant = SymbolVariant::LowerSymbol;
    else if (o.symbol == "classical") variant = SymbolVariant::ClassicalSymbol;
    else if (o.symbol == "volume") variant = SymbolVariant::ClassicalVolume;
    else throw ParamError("--symbol must be upper, lower, classical, or volume");

    std::vector<std::string> rows;
    json jrows = json::array();
    for (double lam : grid) {
        PhaseIntegralReport rep = phase_integral(params, frame, variant, lam);
        rows.push_back(io::format_double(lam) + "," + io::format_double(rep.value) + "," +
                       io::format_double(rep.error_estimate));
        jrows.push_back({{"lambda", lam},
                         {"value", rep.value},
                         {"error_estimate", rep.error_estimate}});
    }
    if (o.format == "json")
        emit(o, json{{"meta", json_meta(o, "volume")}, {"rows", jrows}}.dump(2) + "\n");
    else
        emit(o, csv_table(standard_header(o, "volume"), "lambda,value,error_estimate", rows));
    return kExitPass;
}

// --- config plumbing ----------------------------------------------------------

void apply_json_config(CLI::App* sub, Options& o) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw ParamError("cannot open config file: " + o.config_path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw ParamError(std::string("config file: ") + e.what());
    }
    if (!cfg.is_object()) throw ParamError("config file must hold a JSON object");

    auto overridden = [&](const std::string& flag) {
        CLI::Option* opt = sub->get_option_no_throw("--" + flag);
        return opt != nullptr && opt->count() > 0;
    };
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        const std::string& key = it.key();
        if (overridden(key)) continue; // command-line flags win
        const json& v = it.value();
        try {
            if (key == "family") o.family = v.get<std::string>();
            else if (key == "b") o.b = v.get<double>();
            else if (key == "zeta") o.zeta = v.get<double>();
            else if (key == "m") o.m = v.get<int>();
            else if (key == "n") o.n = v.get<int>();
            else if (key == "backend") o.backend = v.get<std::string>();
            else if (key == "want") o.want = v.get<int>();
            else if (key == "tol") o.tol = v.get<double>();
            else if (key == "lambda-grid") o.lambda_grid = v.get<std::string>();
            else if (key == "t-grid") o.t_grid = v.get<std::string>();
            else if (key == "a") o.a = v.get<double>();
            else if (key == "out") o.out = v.get<std::string>();
            else if (key == "format") o.format = v.get<std::string>();
            else if (key == "seed") o.seed = v.get<unsigned long long>();
            else if (key == "nodes") o.nodes = v.get<int>();
            else if (key == "trials") o.trials = v.get<int>();
            else if (key == "symbol") o.symbol = v.get<std::string>();
            else if (key == "spectrum-file") o.spectrum_file = v.get<std::string>();
            else if (key == "riesz-file") o.riesz_file = v.get<std::string>();
            else throw ParamError("config file: unknown field '" + key + "'");
        } catch (const json::exception&) {
            throw ParamError("config file: bad value for field '" + key + "'");
        }
    }
}

void add_common_flags(CLI::App* sub, Options& o) {
    sub->add_option("--family", o.family, "Operator family: zeta or mn");
    sub->add_option("--b", o.b, "Quantization parameter b > 0");
    sub->add_option("--zeta", o.zeta, "Spectral-dual parameter (zeta family)");
    sub->add_option("--m", o.m, "Exponent m (mn family)");
    sub->add_option("--n", o.n, "Exponent n (mn family)");
    sub->add_option("--backend", o.backend, "Basis backend: osc, grid, or both");
    sub->add_option("--want", o.want, "Number of eigenvalues to certify");
    sub->add_option("--tol", o.tol, "Relative certification tolerance");
    sub->add_option("--lambda-grid", o.lambda_grid, "Lambda grid lo:hi:steps (log-spaced)");
    sub->add_option("--t-grid", o.t_grid, "Heat-parameter grid lo:hi:steps (log-spaced)");
    sub->add_option("--a", o.a, "Coherent-frame Gaussian exponent");
    sub->add_option("--out", o.out, "Output path (default: stdout)");
    sub->add_option("--format", o.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", o.seed, "Random seed for randomized checks");
    sub->add_option("--config", o.config_path, "JSON config file (flags override it)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral toolkit for functional-difference operators"};
    app.require_subcommand(1);

    Options o;
    struct Command {
        CLI::App* sub;
        int (*run)(const Options&);
    };
    std::vector<Command> commands;

    auto* sp = app.add_subcommand("spectrum", "Certified eigenvalue ladder");
    add_common_flags(sp, o);
    commands.push_back({sp, cmd_spectrum});

    auto* sw = app.add_subcommand("sandwich", "Phase-integral bounds vs Riesz mean");
    add_common_flags(sw, o);
    sw->add_option("--spectrum-file", o.spectrum_file,
                   "Use eigenvalues from a CSV file instead of running the ladder");
    commands.push_back({sw, cmd_sandwich});

    auto* wy = app.add_subcommand("weyl", "Three-term counting-asymptotics fit");
    add_common_flags(wy, o);
    wy->add_option("--riesz-file", o.riesz_file, "Fit lambda,riesz samples from a CSV file");
    commands.push_back({wy, cmd_weyl});

    auto* ht = app.add_subcommand("heat", "Heat-trace ratio table (Tauberian check)");
    add_common_flags(ht, o);
    ht->add_option("--spectrum-file", o.spectrum_file,
                   "Use eigenvalues from a CSV file instead of running the ladder");
    commands.push_back({ht, cmd_heat});

    auto* bs = app.add_subcommand("bs", "Resolvent-kernel counting bound report");
    add_common_flags(bs, o);
    bs->add_option("--nodes", o.nodes, "Quadrature nodes for the kernel discretization");
    commands.push_back({bs, cmd_bs});

    auto* cc = app.add_subcommand("coherent-check", "Phase-space identity checks");
    add_common_flags(cc, o);
    cc->add_option("--trials", o.trials, "Number of random test functions");
    commands.push_back({cc, cmd_coherent_check});

    auto* vol = app.add_subcommand("volume", "Phase-space integral of a symbol");
    add_common_flags(vol, o);
    vol->add_option("--symbol", o.symbol, "Symbol variant: upper, lower, classical, volume");
    commands.push_back({vol, cmd_volume});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    try {
        for (const auto& c : commands)
            if (c.sub->parsed()) {
                apply_json_config(c.sub, o);
                return c.run(o);
            }
        std::cerr << "error: no subcommand selected\n";
        return kExitConfig;
    } catch (const ParamError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const RangeError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ResolutionError& e) {
        std::cerr << "precision: " << e.what() << "\n";
        return kExitPartial;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
}
