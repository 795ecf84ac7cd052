// gtr: command-line front end for the GTR fading library.
//
// Subcommands: stats, sep, capacity, mc {envelope,sep,capacity}, figure.
// Exit codes: 0 success, 2 invalid parameters, 3 numerical non-convergence.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gtr/mcsim.hpp"
#include "gtr/models.hpp"
#include "gtr/perf.hpp"
#include "gtr/quad.hpp"
#include "gtr/specfun.hpp"
#include "json.hpp"

namespace {

using json = nlohmann::json;
using namespace gtr;

constexpr const char* kToolVersion = "1.0.0";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------------------------------------------------------------------------
// Shared parameter plumbing
// ---------------------------------------------------------------------------

struct ModelOpts {
    double k_linear = 1.0;
    double k_db = std::nan("");
    double delta = 0.0;
    double snr_db = std::nan("");
    double gamma_bar = 1.0;
    double n0 = 1.0;
    std::string phase = "uniform";

    double K() const { return std::isnan(k_db) ? k_linear : db_to_linear(k_db); }
    double gb() const { return std::isnan(snr_db) ? gamma_bar : db_to_linear(snr_db); }
};

// "uniform" | "trunc:p=0.3[,phi=0.0]" | "vm:eta=3[,center=pi|0]"
models::PhaseDistribution parse_phase(const std::string& s) {
    if (s == "uniform") return models::Uniform{};
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::stringstream rest(s.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw CLI::ValidationError("--phase", "expected key=value: " + item);
            }
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    if (kind == "trunc") {
        if (!kv.count("p")) throw CLI::ValidationError("--phase", "trunc requires p=");
        const double p = std::stod(kv["p"]);
        const double phi = kv.count("phi") ? std::stod(kv["phi"]) : 0.0;
        return models::TruncatedUniform{p, phi};
    }
    if (kind == "vm") {
        if (!kv.count("eta")) throw CLI::ValidationError("--phase", "vm requires eta=");
        const double eta = std::stod(kv["eta"]);
        bool at_pi = true;
        if (kv.count("center")) {
            if (kv["center"] == "0") at_pi = false;
            else if (kv["center"] != "pi") {
                throw CLI::ValidationError("--phase", "center must be pi or 0");
            }
        }
        return models::VonMises{eta, at_pi};
    }
    throw CLI::ValidationError("--phase", "unknown phase family: " + kind);
}

void add_model_opts(CLI::App* cmd, ModelOpts& o) {
    auto* k = cmd->add_option("--K", o.k_linear, "LOS-to-diffuse power ratio (linear)");
    cmd->add_option("--K-db", o.k_db, "K in dB")->excludes(k);
    cmd->add_option("--delta", o.delta, "LOS balance parameter in [0,1]");
    auto* g = cmd->add_option("--gamma-bar", o.gamma_bar, "average SNR (linear)");
    cmd->add_option("--snr-db", o.snr_db, "average SNR in dB")->excludes(g);
    cmd->add_option("--n0", o.n0, "noise power density");
    cmd->add_option("--phase", o.phase,
                    "phase family: uniform | trunc:p=..[,phi=..] | vm:eta=..[,center=pi|0]");
}

models::ChannelModel make_model(const ModelOpts& o) {
    return models::ChannelModel(o.K(), o.delta, o.gb(), parse_phase(o.phase), o.n0);
}

struct SweepSpec {
    std::string variable;
    double start = 0.0, stop = 1.0;
    int points = 2;
    bool log_scale = false;
};

// var:start:stop:points[:log]
SweepSpec parse_sweep(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 4 || parts.size() > 5) {
        throw CLI::ValidationError("--sweep", "expected var:start:stop:points[:log]");
    }
    SweepSpec spec;
    spec.variable = parts[0];
    static const std::vector<std::string> vars = {"snr_db", "K_db", "delta",
                                                  "p", "eta", "r_norm"};
    if (std::find(vars.begin(), vars.end(), spec.variable) == vars.end()) {
        throw CLI::ValidationError("--sweep", "unknown sweep variable: " + spec.variable);
    }
    spec.start = std::stod(parts[1]);
    spec.stop = std::stod(parts[2]);
    spec.points = std::stoi(parts[3]);
    if (parts.size() == 5) {
        if (parts[4] != "log") throw CLI::ValidationError("--sweep", "scale must be 'log'");
        spec.log_scale = true;
    }
    if (!(spec.start < spec.stop)) {
        throw CLI::ValidationError("--sweep", "requires start < stop");
    }
    if (spec.points < 2) throw CLI::ValidationError("--sweep", "requires points >= 2");
    if (spec.log_scale && !(spec.start > 0.0)) {
        throw CLI::ValidationError("--sweep", "log scale requires start > 0");
    }
    return spec;
}

std::vector<double> sweep_grid(const SweepSpec& s) {
    std::vector<double> xs(static_cast<std::size_t>(s.points));
    for (int i = 0; i < s.points; ++i) {
        const double t = static_cast<double>(i) / (s.points - 1);
        xs[static_cast<std::size_t>(i)] =
            s.log_scale ? s.start * std::pow(s.stop / s.start, t)
                        : s.start + t * (s.stop - s.start);
    }
    return xs;
}

// Apply one sweep coordinate to a copy of the base parameters; returns the
// model plus the (possibly rescaled) evaluation abscissa for r-valued stats.
models::ChannelModel sweep_model(const ModelOpts& base, const SweepSpec& sw, double x) {
    ModelOpts o = base;
    if (sw.variable == "snr_db") {
        o.snr_db = x;
    } else if (sw.variable == "K_db") {
        o.k_db = x;
        o.k_linear = 1.0;
    } else if (sw.variable == "delta") {
        o.delta = x;
    } else if (sw.variable == "p" || sw.variable == "eta") {
        models::PhaseDistribution ph = parse_phase(o.phase);
        if (sw.variable == "p") {
            double phi = 0.0;
            if (const auto* t = std::get_if<models::TruncatedUniform>(&ph)) phi = t->phi;
            return models::ChannelModel(o.K(), o.delta, o.gb(),
                                        models::TruncatedUniform{x, phi}, o.n0);
        }
        bool at_pi = true;
        if (const auto* v = std::get_if<models::VonMises>(&ph)) at_pi = v->centered_at_pi;
        return models::ChannelModel(o.K(), o.delta, o.gb(),
                                    models::VonMises{x, at_pi}, o.n0);
    }
    return make_model(o);
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

struct Row {
    double x;
    double value;
    models::Method method;
    double error_estimate;
};

json make_manifest(const std::string& command, const json& params,
                   std::optional<std::uint64_t> seed, const std::string& payload) {
    json m;
    m["tool"] = "gtr";
    m["version"] = kToolVersion;
    m["command"] = command;
    m["parameters"] = params;
    if (seed) m["seed"] = *seed;
    m["timestamp"] = timestamp_utc();
    m["output_digest"] = "fnv1a64:" + hex64(fnv1a(payload));
    return m;
}

void write_payload(const std::string& out_path, const std::string& payload,
                   const json& manifest) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw CLI::ValidationError("--out", "cannot open " + out_path);
        f << payload;
    }
    std::ofstream mf(out_path + ".manifest.json", std::ios::binary);
    mf << manifest.dump(2) << "\n";
}

std::string rows_to_csv(const std::vector<Row>& rows, const std::string& x_name) {
    std::string s = x_name + ",value,method,error_estimate\n";
    for (const auto& r : rows) {
        s += fmt17(r.x) + "," + fmt17(r.value) + "," +
             (r.method == models::Method::ClosedForm ? "closed_form" : "quadrature") +
             "," + fmt17(r.error_estimate) + "\n";
    }
    return s;
}

json rows_to_json(const std::vector<Row>& rows, const std::string& x_name) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{x_name, r.x},
                       {"value", r.value},
                       {"method", r.method == models::Method::ClosedForm
                                      ? "closed_form"
                                      : "quadrature"},
                       {"error_estimate", r.error_estimate}});
    }
    return arr;
}

void emit_rows(const std::vector<Row>& rows, const std::string& x_name,
               const std::string& format, const std::string& out_path,
               const std::string& command, const json& params) {
    if (format == "json") {
        json doc;
        doc["rows"] = rows_to_json(rows, x_name);
        doc["manifest"] = make_manifest(command, params, std::nullopt,
                                        doc["rows"].dump());
        const std::string payload = doc.dump(2) + "\n";
        write_payload(out_path, payload, doc["manifest"]);
        return;
    }
    const std::string payload = rows_to_csv(rows, x_name);
    write_payload(out_path, payload,
                  make_manifest(command, params, std::nullopt, payload));
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("GTR_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 1;
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

struct StatsOpts {
    ModelOpts model;
    std::string quantity = "pdf";
    std::string sweep;
    std::string format = "csv";
    std::string out;
    double r = 1.0;
    double s = -1.0;
    int order = 1;
    double f_d = 100.0;
};

models::Statistic eval_stat(const StatsOpts& o, const models::ChannelModel& m,
                            double r_eval) {
    if (o.quantity == "pdf") return models::envelope_pdf(r_eval, m);
    if (o.quantity == "cdf") return models::envelope_cdf(r_eval, m);
    if (o.quantity == "snr-pdf") return models::snr_pdf(r_eval, m);
    if (o.quantity == "mgf") return models::mgf(o.s, m);
    if (o.quantity == "moment") return models::moment(o.order, m);
    if (o.quantity == "aof") return models::amount_of_fading(m);
    if (o.quantity == "lcr") {
        return models::level_crossing_rate(r_eval, m, models::MobilityConfig{o.f_d});
    }
    return models::average_outage_duration(r_eval, m, models::MobilityConfig{o.f_d});
}

int run_stats(const StatsOpts& o) {
    std::vector<Row> rows;
    json params = {{"quantity", o.quantity}, {"K", o.model.K()},
                   {"delta", o.model.delta}, {"gamma_bar", o.model.gb()},
                   {"n0", o.model.n0},       {"phase", o.model.phase}};
    if (o.sweep.empty()) {
        const auto m = make_model(o.model);
        const auto st = eval_stat(o, m, o.r);
        rows.push_back({o.r, st.value, st.method, st.error_estimate});
        emit_rows(rows, "x", o.format, o.out, "stats", params);
        return 0;
    }
    const SweepSpec sw = parse_sweep(o.sweep);
    params["sweep"] = o.sweep;
    for (double x : sweep_grid(sw)) {
        const auto m = sweep_model(o.model, sw, x);
        const double r_eval =
            sw.variable == "r_norm" ? x * std::sqrt(m.mean_power()) : o.r;
        const auto st = eval_stat(o, m, r_eval);
        rows.push_back({x, st.value, st.method, st.error_estimate});
    }
    emit_rows(rows, sw.variable, o.format, o.out, "stats", params);
    return 0;
}

// ---------------------------------------------------------------------------
// sep / capacity
// ---------------------------------------------------------------------------

perf::Modulation parse_modulation(const std::string& mod, int m) {
    perf::Modulation result;
    if (mod == "mpsk") result = perf::MPSK{m};
    else if (mod == "mqam") result = perf::MQAM{m};
    else if (mod == "mdpsk") result = perf::MDPSK{m};
    else if (mod == "mfsk") result = perf::MFSK{m};
    else throw CLI::ValidationError("--mod", "unknown modulation: " + mod);
    perf::validate(result);
    return result;
}

struct SepOpts {
    ModelOpts model;
    std::string mod = "mqam";
    int m = 16;
    int branches = 1;
    std::string sweep;
    std::string format = "csv";
    std::string out;
};

int run_sep(const SepOpts& o) {
    const auto mod = parse_modulation(o.mod, o.m);
    json params = {{"mod", o.mod},     {"M", o.m},
                   {"L", o.branches},  {"K", o.model.K()},
                   {"delta", o.model.delta}, {"phase", o.model.phase}};
    std::vector<Row> rows;
    auto eval = [&](const ModelOpts& mo) {
        return perf::sep(mod, perf::LinkConfig::iid(make_model(mo), o.branches));
    };
    if (o.sweep.empty()) {
        const auto st = eval(o.model);
        rows.push_back({o.model.gb(), st.value, st.method, st.error_estimate});
        emit_rows(rows, "gamma_bar", o.format, o.out, "sep", params);
        return 0;
    }
    const SweepSpec sw = parse_sweep(o.sweep);
    if (sw.variable != "snr_db") {
        throw CLI::ValidationError("--sweep", "sep sweeps over snr_db only");
    }
    params["sweep"] = o.sweep;
    for (double x : sweep_grid(sw)) {
        ModelOpts mo = o.model;
        mo.snr_db = x;
        const auto st = eval(mo);
        rows.push_back({x, st.value, st.method, st.error_estimate});
    }
    emit_rows(rows, "snr_db", o.format, o.out, "sep", params);
    return 0;
}

struct CapacityOpts {
    ModelOpts model;
    int branches = 1;
    std::string sweep;
    std::string asymptote;  // "", low, rice, gtr, gtr-approx, gtr-delta1
    bool loss = false;
    std::string format = "csv";
    std::string out;
};

double eval_asymptote(const CapacityOpts& o, const models::ChannelModel& m,
                      double total_db) {
    if (o.asymptote == "low") {
        return perf::capacity_low_snr(perf::LinkConfig::iid(m, o.branches));
    }
    perf::CapacityRegime regime = perf::CapacityRegime::RiceExact;
    if (o.asymptote == "gtr") regime = perf::CapacityRegime::GtrExact;
    else if (o.asymptote == "gtr-approx") regime = perf::CapacityRegime::GtrLargeKDelta;
    else if (o.asymptote == "gtr-delta1") regime = perf::CapacityRegime::GtrDeltaOne;
    else if (o.asymptote != "rice") {
        throw CLI::ValidationError("--asymptote", "unknown regime: " + o.asymptote);
    }
    const auto a = perf::capacity_high_snr(m, regime);
    return a.slope_nu * total_db + a.intercept_mu;
}

int run_capacity(const CapacityOpts& o) {
    json params = {{"L", o.branches},        {"K", o.model.K()},
                   {"delta", o.model.delta}, {"phase", o.model.phase},
                   {"loss", o.loss}};
    if (!o.asymptote.empty()) params["asymptote"] = o.asymptote;
    std::string payload;
    std::vector<std::string> header = {"snr_db", "capacity"};
    if (o.loss) header = {"K_db", "capacity_loss"};
    else if (!o.asymptote.empty()) header.push_back("asymptote");
    std::vector<std::vector<double>> table;

    auto add_point = [&](double x) {
        if (o.loss) {
            const double K = db_to_linear(x);
            table.push_back({x, perf::capacity_loss(K, o.model.delta)});
            return;
        }
        ModelOpts mo = o.model;
        mo.snr_db = x;
        const auto m = make_model(mo);
        const auto link = perf::LinkConfig::iid(m, o.branches);
        std::vector<double> row = {x, perf::capacity_ora(link).value};
        if (!o.asymptote.empty()) {
            const double total_db = 10.0 * std::log10(link.total_gamma_bar());
            row.push_back(eval_asymptote(o, m, total_db));
        }
        table.push_back(row);
    };

    if (o.sweep.empty()) {
        add_point(o.loss ? 10.0 * std::log10(o.model.K())
                         : 10.0 * std::log10(o.model.gb()));
    } else {
        const SweepSpec sw = parse_sweep(o.sweep);
        if (!o.loss && sw.variable != "snr_db") {
            throw CLI::ValidationError("--sweep", "capacity sweeps over snr_db");
        }
        if (o.loss && sw.variable != "K_db") {
            throw CLI::ValidationError("--sweep", "capacity --loss sweeps over K_db");
        }
        params["sweep"] = o.sweep;
        for (double x : sweep_grid(sw)) add_point(x);
    }

    if (o.format == "json") {
        json arr = json::array();
        for (const auto& row : table) {
            json obj;
            for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
            arr.push_back(obj);
        }
        json doc;
        doc["rows"] = arr;
        doc["manifest"] = make_manifest("capacity", params, std::nullopt, arr.dump());
        write_payload(o.out, doc.dump(2) + "\n", doc["manifest"]);
        return 0;
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        payload += (i ? "," : "") + header[i];
    }
    payload += "\n";
    for (const auto& row : table) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            payload += (i ? "," : "") + fmt17(row[i]);
        }
        payload += "\n";
    }
    write_payload(o.out, payload, make_manifest("capacity", params, std::nullopt, payload));
    return 0;
}

// ---------------------------------------------------------------------------
// mc
// ---------------------------------------------------------------------------

struct McOpts {
    ModelOpts model;
    std::string mod = "mqam";
    int m = 16;
    int branches = 1;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = default_seed();
    int workers = 4;
    std::string out;
};

json mc_common_params(const McOpts& o) {
    return {{"K", o.model.K()},         {"delta", o.model.delta},
            {"gamma_bar", o.model.gb()}, {"phase", o.model.phase},
            {"samples", o.samples},      {"seed", o.seed},
            {"workers", o.workers}};
}

void emit_mc(const McOpts& o, const std::string& command, json& doc,
             const json& params) {
    doc["manifest"] = make_manifest(command, params, o.seed, doc.dump());
    write_payload(o.out, doc.dump(2) + "\n", doc["manifest"]);
}

int run_mc_envelope(const McOpts& o) {
    const auto m = make_model(o.model);
    const mcsim::SimConfig cfg{o.samples, o.seed, o.workers};
    const auto s = mcsim::sample_envelope(m, cfg);
    const double ks = mcsim::ks_distance(s.sorted_samples, [&](double r) {
        return r <= 0.0 ? 0.0 : models::envelope_cdf(r, m).value;
    });
    json doc;
    doc["kind"] = "envelope";
    doc["n"] = s.n;
    doc["mean"] = s.mean;
    doc["raw_moment2"] = s.raw_moment2;
    doc["raw_moment3"] = s.raw_moment3;
    doc["raw_moment4"] = s.raw_moment4;
    doc["analytic_mean_power"] = m.n0() * models::mean_snr(m).value;
    doc["ks_distance"] = ks;
    emit_mc(o, "mc envelope", doc, mc_common_params(o));
    return 0;
}

int run_mc_sep(const McOpts& o) {
    const auto mod = parse_modulation(o.mod, o.m);
    const auto link = perf::LinkConfig::iid(make_model(o.model), o.branches);
    const mcsim::SimConfig cfg{o.samples, o.seed, o.workers};
    const auto est = mcsim::mc_sep(mod, link, cfg);
    const double analytic = perf::sep(mod, link).value;
    json doc;
    doc["kind"] = "sep";
    doc["estimate"] = est.estimate;
    doc["std_error"] = est.std_error;
    doc["n"] = est.n;
    doc["analytic"] = analytic;
    doc["z_score"] = est.std_error > 0.0
                         ? (est.estimate - analytic) / est.std_error
                         : 0.0;
    json params = mc_common_params(o);
    params["mod"] = o.mod;
    params["M"] = o.m;
    params["L"] = o.branches;
    emit_mc(o, "mc sep", doc, params);
    return 0;
}

int run_mc_capacity(const McOpts& o) {
    const auto link = perf::LinkConfig::iid(make_model(o.model), o.branches);
    const mcsim::SimConfig cfg{o.samples, o.seed, o.workers};
    const auto est = mcsim::mc_capacity(link, cfg);
    const double analytic = perf::capacity_ora(link).value;
    json doc;
    doc["kind"] = "capacity";
    doc["estimate"] = est.estimate;
    doc["std_error"] = est.std_error;
    doc["n"] = est.n;
    doc["analytic"] = analytic;
    doc["z_score"] = est.std_error > 0.0
                         ? (est.estimate - analytic) / est.std_error
                         : 0.0;
    json params = mc_common_params(o);
    params["L"] = o.branches;
    emit_mc(o, "mc capacity", doc, params);
    return 0;
}

// ---------------------------------------------------------------------------
// figure
// ---------------------------------------------------------------------------

struct FigureOpts {
    std::string id;
    std::string out_dir = ".";
    double k_inf = 1e4;  // realization of "K -> infinity" captions
};

struct Curve {
    std::string name;
    std::vector<double> ys;
};

void write_figure(const FigureOpts& o, const std::string& stem,
                  const std::string& x_name, const std::string& x_label,
                  const std::string& y_label, bool logy,
                  const std::vector<double>& xs, const std::vector<Curve>& curves,
                  const json& params) {
    namespace fs = std::filesystem;
    fs::create_directories(o.out_dir);
    const std::string csv_path = (fs::path(o.out_dir) / (stem + ".csv")).string();
    const std::string gp_path = (fs::path(o.out_dir) / (stem + ".gp")).string();

    std::string csv = x_name;
    for (const auto& c : curves) csv += "," + c.name;
    csv += "\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        csv += fmt17(xs[i]);
        for (const auto& c : curves) csv += "," + fmt17(c.ys[i]);
        csv += "\n";
    }
    {
        std::ofstream f(csv_path, std::ios::binary);
        f << csv;
    }

    std::string gp = "set datafile separator ','\n";
    gp += "set key bottom right\n";
    gp += "set xlabel '" + x_label + "'\n";
    gp += "set ylabel '" + y_label + "'\n";
    if (logy) gp += "set logscale y\n";
    gp += "set grid\nplot \\\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        gp += "  '" + stem + ".csv' using 1:" + std::to_string(c + 2) +
              " with lines title '" + curves[c].name + "'";
        gp += (c + 1 < curves.size()) ? ", \\\n" : "\n";
    }
    {
        std::ofstream f(gp_path, std::ios::binary);
        f << gp;
    }

    const json manifest = make_manifest("figure " + o.id, params, std::nullopt, csv);
    std::ofstream mf((fs::path(o.out_dir) / (stem + ".manifest.json")).string(),
                     std::ios::binary);
    mf << manifest.dump(2) << "\n";
    std::cout << csv_path << "\n" << gp_path << "\n";
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1.0);
    }
    return xs;
}

int run_figure(const FigureOpts& o) {
    using models::ChannelModel;
    const double Ki = o.k_inf;
    json params = {{"id", o.id}, {"K_inf_realized", Ki}};

    if (o.id == "1a" || o.id == "1") {
        // cdf vs normalized envelope, Delta = 1, K -> inf; GTR-T p-curves or
        // GTR-V eta-curves plus Rayleigh / Rician / Two-Ray references.
        const auto xs = linspace(0.01, 2.0, 120);
        std::vector<std::pair<std::string, models::PhaseDistribution>> fams;
        if (o.id == "1a") {
            for (double p : {1.0, 0.5, 0.2, 0.1}) {
                fams.push_back({"GTR-T p=" + std::to_string(p).substr(0, 4),
                                models::TruncatedUniform{p, 0.0}});
            }
            params["p_set"] = {1.0, 0.5, 0.2, 0.1};
        } else {
            for (double eta : {0.0, 1.0, 2.0, 5.0}) {
                fams.push_back({"GTR-V eta=" + std::to_string(eta).substr(0, 3),
                                models::VonMises{eta, true}});
            }
            params["eta_set"] = {0.0, 1.0, 2.0, 5.0};
        }
        std::vector<Curve> curves;
        auto cdf_curve = [&](const ChannelModel& m) {
            std::vector<double> ys;
            for (double x : xs) {
                ys.push_back(models::envelope_cdf(
                                 x * std::sqrt(m.mean_power()), m)
                                 .value);
            }
            return ys;
        };
        for (auto& [name, ph] : fams) {
            curves.push_back({name, cdf_curve(ChannelModel(Ki, 1.0, 1.0, ph))});
        }
        curves.push_back({"Rayleigh", cdf_curve(ChannelModel(0.0, 0.0, 1.0))});
        curves.push_back({"Rician K=10", cdf_curve(ChannelModel(10.0, 0.0, 1.0))});
        write_figure(o, "fig" + o.id, "r_norm", "r / sqrt(mean power)", "cdf",
                     true, xs, curves, params);
        return 0;
    }
    if (o.id == "3" || o.id == "4") {
        const auto xs = linspace(0.0, 40.0, 41);
        std::vector<Curve> curves;
        auto sep_curve = [&](double K, double delta, int l) {
            std::vector<double> ys;
            for (double db : xs) {
                ChannelModel m(K, delta, db_to_linear(db));
                ys.push_back(perf::sep(perf::MQAM{16},
                                       perf::LinkConfig::iid(m, l))
                                 .value);
            }
            return ys;
        };
        if (o.id == "3") {
            curves.push_back({"Rayleigh", sep_curve(0.0, 0.0, 1)});
            curves.push_back({"Rice K=10", sep_curve(10.0, 0.0, 1)});
            curves.push_back({"GTR-U K=10 d=0.15", sep_curve(10.0, 0.15, 1)});
            curves.push_back({"GTR-U K=10 d=1", sep_curve(10.0, 1.0, 1)});
        } else {
            for (int l : {1, 2, 4}) {
                curves.push_back({"d=0.15 L=" + std::to_string(l),
                                  sep_curve(10.0, 0.15, l)});
                curves.push_back({"d=1 L=" + std::to_string(l),
                                  sep_curve(10.0, 1.0, l)});
            }
        }
        params["modulation"] = "16-QAM";
        write_figure(o, "fig" + o.id, "snr_db", "average SNR per branch (dB)",
                     "SEP", true, xs, curves, params);
        return 0;
    }
    if (o.id == "5" || o.id == "6" || o.id == "7") {
        const auto xs = o.id == "6" ? linspace(-30.0, 0.0, 31)
                                    : (o.id == "7" ? linspace(10.0, 40.0, 31)
                                                   : linspace(0.0, 40.0, 21));
        std::vector<Curve> curves;
        auto cap_curve = [&](double K, double delta, int l) {
            std::vector<double> ys;
            for (double db : xs) {
                ChannelModel m(K, delta, db_to_linear(db));
                ys.push_back(perf::capacity_ora(perf::LinkConfig::iid(m, l)).value);
            }
            return ys;
        };
        if (o.id == "5") {
            for (int l : {1, 2, 4}) {
                curves.push_back({"d=0.15 L=" + std::to_string(l),
                                  cap_curve(10.0, 0.15, l)});
                curves.push_back({"d=1 L=" + std::to_string(l),
                                  cap_curve(10.0, 1.0, l)});
            }
        } else {
            curves.push_back({"Rayleigh", cap_curve(0.0, 0.0, 1)});
            curves.push_back({"Rice K=10", cap_curve(10.0, 0.0, 1)});
            curves.push_back({"GTR-U K=10 d=0.15", cap_curve(10.0, 0.15, 1)});
            curves.push_back({"GTR-U K=10 d=1", cap_curve(10.0, 1.0, 1)});
            if (o.id == "6") {
                std::vector<double> low;
                for (double db : xs) low.push_back(db_to_linear(db) * specfun::kLog2E);
                curves.push_back({"low-SNR asymptote", low});
            } else {
                std::vector<double> rice_asy, gtr_asy;
                const auto ar = perf::capacity_high_snr(
                    ChannelModel(10.0, 0.0, 1.0), perf::CapacityRegime::RiceExact);
                const auto ag = perf::capacity_high_snr(
                    ChannelModel(10.0, 1.0, 1.0), perf::CapacityRegime::GtrExact);
                for (double db : xs) {
                    rice_asy.push_back(ar.slope_nu * db + ar.intercept_mu);
                    gtr_asy.push_back(ag.slope_nu * db + ag.intercept_mu);
                }
                curves.push_back({"Rice asymptote", rice_asy});
                curves.push_back({"GTR-U d=1 asymptote", gtr_asy});
            }
        }
        write_figure(o, "fig" + o.id, "snr_db", "average SNR (dB)",
                     "capacity (bps/Hz)", false, xs, curves, params);
        return 0;
    }
    if (o.id == "8") {
        const auto xs = linspace(0.0, 40.0, 81);  // K in dB
        std::vector<Curve> curves;
        for (double delta : {0.3, 0.6, 0.9, 1.0}) {
            std::vector<double> exact, approx, asym;
            const double limit =
                1.0 - std::log2(1.0 + std::sqrt(1.0 - delta * delta));
            for (double kdb : xs) {
                const double K = db_to_linear(kdb);
                exact.push_back(perf::capacity_loss(K, delta));
                approx.push_back(specfun::kLog2E *
                                 (specfun::gamma_upper_zero(K) -
                                  std::log(0.5 * (1.0 + std::sqrt(1.0 - delta * delta))) -
                                  perf::j_integral_hankel(K, delta)));
                asym.push_back(limit);
            }
            const std::string d = std::to_string(delta).substr(0, 4);
            curves.push_back({"exact d=" + d, exact});
            curves.push_back({"approx d=" + d, approx});
            curves.push_back({"Kinf d=" + d, asym});
        }
        params["delta_set"] = {0.3, 0.6, 0.9, 1.0};
        write_figure(o, "fig8", "K_db", "K (dB)", "capacity loss (bps/Hz)",
                     false, xs, curves, params);
        return 0;
    }
    throw CLI::ValidationError("--id", "unknown figure id: " + o.id);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GTR fading statistics and performance toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file ([subcommand] sections)");
    app.allow_config_extras(CLI::config_extras_mode::ignore_all);
    app.fallthrough();  // lets `gtr stats --config file` reach the app option

    StatsOpts stats;
    auto* cmd_stats = app.add_subcommand("stats", "channel statistics");
    add_model_opts(cmd_stats, stats.model);
    cmd_stats->add_option("--quantity", stats.quantity, "quantity to evaluate")
        ->check(CLI::IsMember({"pdf", "cdf", "snr-pdf", "mgf", "moment", "aof",
                               "lcr", "aod"}));
    cmd_stats->add_option("--sweep", stats.sweep, "var:start:stop:points[:log]");
    cmd_stats->add_option("--format", stats.format)->check(CLI::IsMember({"csv", "json"}));
    cmd_stats->add_option("--out", stats.out, "output path (default stdout)");
    cmd_stats->add_option("--r", stats.r, "envelope abscissa");
    cmd_stats->add_option("--s", stats.s, "MGF argument");
    cmd_stats->add_option("--order", stats.order, "moment order");
    cmd_stats->add_option("--f-d", stats.f_d, "maximum Doppler frequency (Hz)");

    SepOpts sepo;
    auto* cmd_sep = app.add_subcommand("sep", "average symbol error probability");
    add_model_opts(cmd_sep, sepo.model);
    cmd_sep->add_option("--mod", sepo.mod)
        ->check(CLI::IsMember({"mpsk", "mqam", "mdpsk", "mfsk"}));
    cmd_sep->add_option("--M", sepo.m, "constellation size");
    cmd_sep->add_option("--L", sepo.branches, "MRC branches");
    cmd_sep->add_option("--sweep", sepo.sweep, "snr_db:start:stop:points");
    cmd_sep->add_option("--format", sepo.format)->check(CLI::IsMember({"csv", "json"}));
    cmd_sep->add_option("--out", sepo.out);

    CapacityOpts capo;
    auto* cmd_cap = app.add_subcommand("capacity", "ergodic capacity (ORA)");
    add_model_opts(cmd_cap, capo.model);
    cmd_cap->add_option("--L", capo.branches, "MRC branches");
    cmd_cap->add_option("--sweep", capo.sweep, "snr_db (or K_db with --loss)");
    cmd_cap->add_option("--asymptote", capo.asymptote)
        ->check(CLI::IsMember({"low", "rice", "gtr", "gtr-approx", "gtr-delta1"}));
    cmd_cap->add_flag("--loss", capo.loss, "asymptotic capacity loss vs Rician");
    cmd_cap->add_option("--format", capo.format)->check(CLI::IsMember({"csv", "json"}));
    cmd_cap->add_option("--out", capo.out);

    McOpts mco;
    auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo validation");
    cmd_mc->require_subcommand(1);
    auto add_mc_opts = [&](CLI::App* c, bool link_opts) {
        add_model_opts(c, mco.model);
        c->add_option("--samples", mco.samples);
        c->add_option("--seed", mco.seed, "RNG seed (default: GTR_SEED env or 1)");
        c->add_option("--workers", mco.workers);
        c->add_option("--out", mco.out);
        if (link_opts) {
            c->add_option("--mod", mco.mod)
                ->check(CLI::IsMember({"mpsk", "mqam", "mdpsk", "mfsk"}));
            c->add_option("--M", mco.m);
            c->add_option("--L", mco.branches);
        }
    };
    auto* mc_env = cmd_mc->add_subcommand("envelope", "empirical envelope vs cdf");
    add_mc_opts(mc_env, false);
    auto* mc_sep = cmd_mc->add_subcommand("sep", "empirical SEP vs MGF result");
    add_mc_opts(mc_sep, true);
    auto* mc_cap = cmd_mc->add_subcommand("capacity", "empirical capacity");
    add_mc_opts(mc_cap, false);
    mc_cap->add_option("--L", mco.branches);

    FigureOpts figo;
    auto* cmd_fig = app.add_subcommand("figure", "emit plot data + script");
    cmd_fig->add_option("--id", figo.id, "figure id")
        ->required()
        ->check(CLI::IsMember({"1a", "1", "3", "4", "5", "6", "7", "8"}));
    cmd_fig->add_option("--out-dir", figo.out_dir);
    cmd_fig->add_option("--K-inf", figo.k_inf, "finite realization of K -> inf");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(cmd_stats)) return run_stats(stats);
        if (app.got_subcommand(cmd_sep)) return run_sep(sepo);
        if (app.got_subcommand(cmd_cap)) return run_capacity(capo);
        if (app.got_subcommand(cmd_mc)) {
            if (cmd_mc->got_subcommand(mc_env)) return run_mc_envelope(mco);
            if (cmd_mc->got_subcommand(mc_sep)) return run_mc_sep(mco);
            return run_mc_capacity(mco);
        }
        if (app.got_subcommand(cmd_fig)) return run_figure(figo);
    } catch (const quad::NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
