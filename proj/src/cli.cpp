#include "bandspec/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>

#include "bandspec/chebyshev.hpp"
#include "bandspec/csv.hpp"
#include "bandspec/errors.hpp"
#include "bandspec/fourier_emb.hpp"
#include "bandspec/path_oracle.hpp"
#include "bandspec/regularizer.hpp"
#include "bandspec/spectral_estimator.hpp"
#include "bandspec/verify.hpp"

namespace bandspec::cli {

using nlohmann::json;

namespace {

enum class Type { integer, real, text, boolean, int_list, real_list };

struct Key {
    std::string name;
    Type type;
    json fallback;  // null: required
    std::function<bool(const json&)> valid;
    std::string help;
};

bool any(const json&) { return true; }
auto int_at_least(long lo) {
    return [lo](const json& v) { return v.get<long long>() >= lo; };
}
auto int_between(long lo, long hi) {
    return [lo, hi](const json& v) { const auto x = v.get<long long>(); return x >= lo && x <= hi; };
}
auto positive(const json& v) { return v.get<double>() > 0.0; }
auto open_unit(const json& v) { const double x = v.get<double>(); return x > -1.0 && x < 1.0; }
auto one_of(std::vector<std::string> options) {
    return [options](const json& v) {
        return std::find(options.begin(), options.end(), v.get<std::string>()) != options.end();
    };
}

const std::vector<std::pair<Subcommand, std::string>>& subcommand_names() {
    static const std::vector<std::pair<Subcommand, std::string>> names{
        {Subcommand::moments, "moments"}, {Subcommand::paths, "paths"},     {Subcommand::kernel, "kernel"},
        {Subcommand::dos, "dos"},         {Subcommand::theorem, "theorem"}, {Subcommand::emb, "emb"},
        {Subcommand::verify, "verify"}};
    return names;
}

std::vector<Key> keys_for(Subcommand s) {
    std::vector<Key> k{
        {"format", Type::text, "csv", one_of({"csv", "json"}), "output format"},
        {"workers", Type::integer, 1, int_between(1, 256), "worker threads"},
    };
    auto add = [&k](Key key) { k.push_back(std::move(key)); };
    const Key W{"W", Type::integer, nullptr, int_between(1, 4096), "band half-width"};
    const Key seed{"seed", Type::integer, 0, int_at_least(0), "master seed"};
    const Key samples{"samples", Type::integer, 1000, int_between(1, 100000000), "Monte Carlo samples"};
    const Key q{"q", Type::integer, 2, int_between(1, 64), "kernel exponent"};
    const Key eta{"eta", Type::real, 0.5, positive, "truncation exponent"};
    switch (s) {
        case Subcommand::moments:
            add(W);
            add({"n_max", Type::integer, 10, int_between(0, 100000), "maximal degree"});
            add({"N", Type::integer, 0, int_at_least(0), "window half-size (0: n_max W)"});
            add(samples);
            add(seed);
            add({"kind", Type::text, "T", one_of({"T", "U", "UnW"}), "polynomial family"});
            break;
        case Subcommand::paths:
            add({"W", Type::integer, nullptr, int_between(1, 3), "band half-width"});
            add({"max_length", Type::integer, 8, int_between(0, 10), "maximal even length"});
            break;
        case Subcommand::kernel:
            add(q);
            add({"epsilon", Type::real, 0.05, positive, "kernel width"});
            add(eta);
            add({"tolerance", Type::real, 1e-12, [](const json& v) { const double x = v.get<double>(); return x > 0 && x <= 1e-3; }, "quadrature tolerance"});
            add({"t_max", Type::real, 6.0, positive, "largest t"});
            add({"xi_max", Type::real, 3.0, positive, "largest xi"});
            add({"points", Type::integer, 121, int_between(2, 100000), "points per profile"});
            break;
        case Subcommand::dos:
            add(W);
            add({"E0", Type::real, nullptr, open_unit, "energy"});
            add({"epsilon", Type::real, 0.05, positive, "kernel width"});
            add(q);
            add(eta);
            add(samples);
            add(seed);
            add({"n_max", Type::integer, 0, int_at_least(0), "moment degree (0: floor(W^eta/eps))"});
            add({"cut", Type::text, "truncated", one_of({"truncated", "full"}), "kernel cutoff"});
            break;
        case Subcommand::theorem:
            add(W);
            add({"E0", Type::real, nullptr, open_unit, "energy"});
            add({"epsilon", Type::real, nullptr, positive, "imaginary part"});
            add({"samples", Type::integer, 400, int_between(1, 100000000), "Monte Carlo samples"});
            add(seed);
            add({"N", Type::integer, 0, int_at_least(0), "window half-size (0: automatic)"});
            add({"tolerance", Type::real, 1e-6, [](const json& v) { const double x = v.get<double>(); return x > 0 && x < 1; }, "truncation tolerance"});
            break;
        case Subcommand::emb:
            add({"graph", Type::text, "loop", one_of({"loop", "theta"}), "multigraph"});
            add({"W_list", Type::int_list, json::array({8, 16, 32}), [](const json& v) {
                     if (v.empty()) return false;
                     for (const auto& x : v) if (x.get<long long>() < 1 || x.get<long long>() > 4096) return false;
                     return true;
                 }, "band half-widths"});
            add({"g_angles", Type::real_list, json::array({std::numbers::pi / 3}), [](const json& v) {
                     if (v.empty()) return false;
                     for (const auto& x : v) if (std::abs(std::remainder(x.get<double>(), 2 * std::numbers::pi)) < 1e-3) return false;
                     return true;
                 }, "arguments of g (radians), g = exp(i angle)"});
            add(q);
            add({"epsilon", Type::real, 0.05, positive, "kernel width"});
            break;
        case Subcommand::verify:
            add({"fast", Type::boolean, false, any, "only the exact and kernel identities"});
            break;
    }
    return k;
}

std::string flag_of(const std::string& key) {
    std::string f = key;
    std::replace(f.begin(), f.end(), '_', '-');
    return "--" + f;
}

long long to_int(const std::string& key, const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno) throw ConfigError(key + ": expected an integer, got '" + s + "'");
    return v;
}

double to_real(const std::string& key, const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || errno || !std::isfinite(v))
        throw ConfigError(key + ": expected a number, got '" + s + "'");
    return v;
}

std::vector<std::string> split_list(const std::vector<std::string>& parts) {
    std::vector<std::string> out;
    for (const auto& p : parts) {
        std::size_t start = 0;
        while (start <= p.size()) {
            const auto comma = p.find(',', start);
            const auto piece = p.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!piece.empty()) out.push_back(piece);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return out;
}

json from_strings(const Key& k, const std::vector<std::string>& raw) {
    switch (k.type) {
        case Type::integer: return to_int(k.name, raw.at(0));
        case Type::real: return to_real(k.name, raw.at(0));
        case Type::text: return raw.at(0);
        case Type::boolean: return true;
        case Type::int_list: {
            json a = json::array();
            for (const auto& s : split_list(raw)) a.push_back(to_int(k.name, s));
            return a;
        }
        case Type::real_list: {
            json a = json::array();
            for (const auto& s : split_list(raw)) a.push_back(to_real(k.name, s));
            return a;
        }
    }
    return nullptr;
}

// Checks the JSON type of a config-file value and normalises numbers.
json from_file(const Key& k, const json& v) {
    auto fail = [&k]() -> json { throw ConfigError(k.name + ": wrong type in config file"); };
    switch (k.type) {
        case Type::integer:
            if (!v.is_number_integer()) return fail();
            return v.get<long long>();
        case Type::real:
            if (!v.is_number()) return fail();
            return v.get<double>();
        case Type::text:
            if (!v.is_string()) return fail();
            return v;
        case Type::boolean:
            if (!v.is_boolean()) return fail();
            return v;
        case Type::int_list: {
            if (!v.is_array()) return fail();
            json a = json::array();
            for (const auto& x : v) {
                if (!x.is_number_integer()) return fail();
                a.push_back(x.get<long long>());
            }
            return a;
        }
        case Type::real_list: {
            if (!v.is_array()) return fail();
            json a = json::array();
            for (const auto& x : v) {
                if (!x.is_number()) return fail();
                a.push_back(x.get<double>());
            }
            return a;
        }
    }
    return fail();
}

Subcommand subcommand_from(const std::string& s) {
    for (const auto& [sub, name] : subcommand_names())
        if (name == s) return sub;
    throw ConfigError("unknown subcommand '" + s + "'");
}

std::string default_output_dir() {
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return "bandspec_out";
}

}  // namespace

std::string to_string(Subcommand s) {
    for (const auto& [sub, name] : subcommand_names())
        if (sub == s) return name;
    return "?";
}

RunConfig parse_config(const std::vector<std::string>& args, const std::optional<std::string>& config_file) {
    CLI::App app{"bandspec: random band matrix density-of-states toolkit"};
    app.require_subcommand(1);
    struct Slot {
        CLI::Option* option = nullptr;
        std::vector<std::string> values;
        bool flag = false;
    };
    std::map<Subcommand, std::map<std::string, Slot>> slots;
    std::map<Subcommand, CLI::App*> apps;
    std::string config_path, output_dir;
    for (const auto& [sub, name] : subcommand_names()) {
        CLI::App* sc = app.add_subcommand(name);
        apps[sub] = sc;
        sc->add_option("--config", config_path, "JSON config file");
        sc->add_option("--output", output_dir, "output directory (default: $" + std::string(kOutputDirEnv) + ")");
        auto& m = slots[sub];
        for (const auto& key : keys_for(sub)) {
            Slot& slot = m[key.name];
            if (key.type == Type::boolean) {
                slot.option = sc->add_flag(flag_of(key.name), slot.flag, key.help);
            } else {
                slot.option = sc->add_option(flag_of(key.name), slot.values, key.help);
                if (key.type != Type::int_list && key.type != Type::real_list) slot.option->expected(1);
            }
        }
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        throw ConfigError(app.help());
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    RunConfig cfg;
    bool found = false;
    for (const auto& [sub, sc] : apps)
        if (sc->parsed()) cfg.subcommand = sub, found = true;
    if (!found) throw ConfigError("a subcommand is required");

    const auto keys = keys_for(cfg.subcommand);
    json file_values = json::object();
    std::string file = config_file.value_or(config_path);
    if (!config_path.empty()) file = config_path;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw ConfigError("cannot open config file '" + file + "'");
        try {
            in >> file_values;
        } catch (const json::exception& e) {
            throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
        }
        if (!file_values.is_object()) throw ConfigError("config file must hold a JSON object");
    }

    json params = json::object();
    for (auto it = file_values.begin(); it != file_values.end(); ++it) {
        if (it.key() == "subcommand") {
            if (!it.value().is_string() || subcommand_from(it.value().get<std::string>()) != cfg.subcommand)
                throw ConfigError("config file subcommand does not match the command line");
            continue;
        }
        if (it.key() == "output") {
            if (!it.value().is_string()) throw ConfigError("output: wrong type in config file");
            cfg.output_dir = it.value().get<std::string>();
            continue;
        }
        const auto k = std::find_if(keys.begin(), keys.end(), [&](const Key& x) { return x.name == it.key(); });
        if (k == keys.end())
            throw ConfigError("unknown key '" + it.key() + "' for subcommand " + to_string(cfg.subcommand));
        params[k->name] = from_file(*k, it.value());
    }
    auto& m = slots[cfg.subcommand];
    for (const auto& key : keys) {
        const Slot& slot = m[key.name];
        if (slot.option->count() == 0) continue;
        params[key.name] = key.type == Type::boolean ? json(slot.flag) : from_strings(key, slot.values);
    }
    for (const auto& key : keys) {
        if (!params.contains(key.name)) {
            if (key.fallback.is_null()) throw ConfigError("missing required key '" + key.name + "'", exit_missing_key);
            params[key.name] = key.fallback;
        }
        if (!key.valid(params[key.name]))
            throw ConfigError("value out of range for '" + key.name + "': " + params[key.name].dump(), exit_out_of_range);
    }
    if (cfg.subcommand == Subcommand::paths && params["max_length"].get<long long>() % 2 != 0)
        throw ConfigError("max_length must be even", exit_out_of_range);

    cfg.format = params["format"].get<std::string>();
    params.erase("format");
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (cfg.output_dir.empty()) cfg.output_dir = default_output_dir();
    cfg.parameters = std::move(params);
    return cfg;
}

json manifest(const RunConfig& config) {
    json m;
    m["tool"] = "bandspec";
    m["version"] = BANDSPEC_VERSION;
    m["schema_version"] = kCsvSchemaVersion;
    m["subcommand"] = to_string(config.subcommand);
    m["format"] = config.format;
    m["parameters"] = config.parameters;
    m["seed"] = config.parameters.contains("seed") ? config.parameters["seed"] : json(nullptr);
    return m;
}

namespace {

json table_json(const CsvTable& t) {
    json j;
    j["schema_version"] = t.schema_version;
    j["kind"] = t.kind;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    return j;
}

class Writer {
public:
    Writer(const RunConfig& cfg) : cfg_(cfg) {
        std::error_code ec;
        std::filesystem::create_directories(cfg.output_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + cfg.output_dir + "': " + ec.message());
    }

    void table(const std::string& stem, const CsvTable& t) {
        const std::string name = stem + (cfg_.format == "json" ? ".json" : ".csv");
        std::ofstream out = open(name);
        if (cfg_.format == "json")
            out << table_json(t).dump(2) << '\n';
        else
            write_csv(out, t);
        close(out, name);
    }

    void finish() {
        json m = manifest(cfg_);
        m["outputs"] = outputs_;
        std::ofstream out = open("manifest.json", false);
        out << m.dump(2) << '\n';
        close(out, "manifest.json");
    }

private:
    std::ofstream open(const std::string& name, bool record = true) {
        const auto path = std::filesystem::path(cfg_.output_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + path.string() + "'");
        if (record) outputs_.push_back(name);
        return out;
    }
    static void close(std::ofstream& out, const std::string& name) {
        out.close();
        if (!out) throw IoError("write failed for '" + name + "'");
    }

    const RunConfig& cfg_;
    std::vector<std::string> outputs_;
};

template <class T>
T get(const json& p, const char* key) {
    return p.at(key).get<T>();
}

int run_moments(const RunConfig& cfg, Writer& w, std::ostream& log) {
    const auto& p = cfg.parameters;
    const int W = get<int>(p, "W"), n_max = get<int>(p, "n_max");
    int N = get<int>(p, "N");
    if (N == 0) N = std::max(W, n_max * W);
    const auto seed = get<std::uint64_t>(p, "seed");
    const auto kind = poly_kind_from_string(get<std::string>(p, "kind"));
    MomentOptions opt;
    opt.workers = get<int>(p, "workers");
    const auto m = estimate_moments(BandMatrixSpec::make(W, N, seed), kind, n_max, get<long>(p, "samples"), opt);
    CsvTable t;
    t.kind = "moments";
    t.columns = {"W", "N", "kind", "n", "value", "std_error", "samples", "seed"};
    for (int n = 0; n <= n_max; ++n)
        t.rows.push_back({std::to_string(W), std::to_string(N), to_string(kind), std::to_string(n),
                          format_double(m.values[n]), format_double(m.std_errors[n]),
                          std::to_string(m.sample_count), std::to_string(seed)});
    w.table("moments", t);
    log << "moments: " << n_max + 1 << " degrees, " << m.sample_count << " samples\n";
    return exit_ok;
}

int run_paths(const RunConfig& cfg, Writer& w, std::ostream& log) {
    const auto& p = cfg.parameters;
    const auto table = build_table(get<int>(p, "W"), get<int>(p, "max_length"));
    w.table("paths", to_csv(table));
    log << "paths: identity verified for n <= " << table.max_length << '\n';
    return exit_ok;
}

int run_kernel(const RunConfig& cfg, Writer& w, std::ostream& log) {
    const auto& p = cfg.parameters;
    const auto params = KernelParams::make(get<int>(p, "q"), get<double>(p, "epsilon"), get<double>(p, "eta"),
                                           get<double>(p, "tolerance"));
    const int points = get<int>(p, "points");
    CsvTable phi;
    phi.kind = "kernel_phi";
    phi.columns = {"t", "phi"};
    const double t_max = get<double>(p, "t_max"), xi_max = get<double>(p, "xi_max");
    for (int i = 0; i < points; ++i) {
        const double t = t_max * i / (points - 1);
        phi.rows.push_back({format_double(t), format_double(phi_q(params, t))});
    }
    CsvTable F;
    F.kind = "kernel_F";
    F.columns = {"xi", "abs_F"};
    for (int i = 0; i < points; ++i) {
        const double xi = xi_max * i / (points - 1);
        F.rows.push_back({format_double(xi), format_double(std::abs(F_q(params, xi)))});
    }
    w.table("kernel_phi", phi);
    w.table("kernel_F", F);
    for (const auto& warning : params.regime_warnings()) log << "warning: " << warning << '\n';
    log << "kernel: A_q = " << format_double(params.A_q) << '\n';
    return exit_ok;
}

const std::vector<std::string> kEstimateColumns{"W", "E0", "epsilon", "q", "eta", "samples",
                                                "estimate", "std_error", "reference", "error"};

int run_dos(const RunConfig& cfg, Writer& w, std::ostream& log) {
    const auto& p = cfg.parameters;
    const int W = get<int>(p, "W");
    const double E0 = get<double>(p, "E0");
    const auto params = KernelParams::make(get<int>(p, "q"), get<double>(p, "epsilon"), get<double>(p, "eta"));
    const auto cut = get<std::string>(p, "cut") == "full" ? KernelCut::full : KernelCut::truncated;
    int degree = get<int>(p, "n_max");
    if (degree == 0) degree = kernel_cutoff_degree(W, params);
    require(degree >= 1, "moment degree must be >= 1");
    MomentOptions opt;
    opt.workers = get<int>(p, "workers");
    opt.keep_samples = true;
    const long samples = get<long>(p, "samples");
    const auto m = estimate_moments(BandMatrixSpec::make(W, truncation_radius_for_degree(degree, W), get<std::uint64_t>(p, "seed")),
                                    PolyKind::T, degree, samples, opt);
    const auto r = dos_from_moments(m, params, E0, cut);
    const double reference = 1.0 + phi_q(params, 2.0 * params.epsilon) * (1.0 - 2.0 * E0 * E0);
    CsvTable t;
    t.kind = "dos";
    t.columns = kEstimateColumns;
    for (const char* c : {"dos", "tail_bound", "n_used"}) t.columns.push_back(c);
    t.rows.push_back({std::to_string(W), format_double(E0), format_double(params.epsilon), std::to_string(params.q),
                      format_double(params.eta), std::to_string(samples), format_double(r.value),
                      format_double(r.std_error), format_double(reference), format_double(std::abs(r.value - reference)),
                      format_double(r.dos), format_double(r.tail_bound), std::to_string(r.n_used)});
    w.table("dos", t);
    for (const auto& warning : params.regime_warnings()) log << "warning: " << warning << '\n';
    log << "dos: bracket " << format_double(r.value) << " +- " << format_double(r.std_error) << '\n';
    return exit_ok;
}

int run_theorem(const RunConfig& cfg, Writer& w, std::ostream& log) {
    const auto& p = cfg.parameters;
    const int W = get<int>(p, "W");
    const double eps = get<double>(p, "epsilon"), E0 = get<double>(p, "E0");
    int N = get<int>(p, "N");
    if (N == 0) N = resolvent_truncation(W, eps, get<double>(p, "tolerance"));
    const long samples = get<long>(p, "samples");
    if (eps < std::pow(static_cast<double>(W), -0.99)) log << "warning: epsilon < W^-0.99\n";
    const auto r = theorem_error(W, E0, eps, samples, get<std::uint64_t>(p, "seed"), get<int>(p, "workers"), N);
    CsvTable t;
    t.kind = "theorem";
    t.columns = kEstimateColumns;
    t.columns.push_back("N");
    t.rows.push_back({std::to_string(W), format_double(E0), format_double(eps), "nan", "nan", std::to_string(samples),
                      format_double(r.estimate), format_double(r.std_error), format_double(r.reference),
                      format_double(r.error), std::to_string(r.N)});
    w.table("theorem", t);
    log << "theorem: error " << format_double(r.error) << " +- " << format_double(r.std_error) << '\n';
    return exit_ok;
}

int run_emb(const RunConfig& cfg, Writer& w, std::ostream& log) {
    const auto& p = cfg.parameters;
    const auto graph_id = get<std::string>(p, "graph");
    const auto graph = graph_id == "theta" ? MultiGraph::theta() : MultiGraph::loop();
    const auto params = KernelParams::make(get<int>(p, "q"), get<double>(p, "epsilon"));
    std::vector<std::complex<double>> gs;
    for (double a : get<std::vector<double>>(p, "g_angles")) gs.push_back(std::polar(1.0, a));
    const auto t = emb_ladder(graph_id, graph, get<std::vector<int>>(p, "W_list"), gs, params, get<int>(p, "workers"));
    w.table("emb", t);
    log << "emb: " << t.rows.size() << " rows\n";
    return exit_ok;
}

int run_verify_cmd(const RunConfig& cfg, Writer& w, std::ostream& log) {
    const auto& p = cfg.parameters;
    const auto checks = run_verify(get<bool>(p, "fast"), get<int>(p, "workers"));
    CsvTable t;
    t.kind = "verify";
    t.columns = {"check", "passed", "detail"};
    bool all = true;
    for (const auto& c : checks) {
        log << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
        t.rows.push_back({c.name, c.passed ? "1" : "0", c.detail});
        all = all && c.passed;
    }
    w.table("verify", t);
    return all ? exit_ok : exit_check_failed;
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
    Writer w(config);
    int code = exit_ok;
    switch (config.subcommand) {
        case Subcommand::moments: code = run_moments(config, w, log); break;
        case Subcommand::paths: code = run_paths(config, w, log); break;
        case Subcommand::kernel: code = run_kernel(config, w, log); break;
        case Subcommand::dos: code = run_dos(config, w, log); break;
        case Subcommand::theorem: code = run_theorem(config, w, log); break;
        case Subcommand::emb: code = run_emb(config, w, log); break;
        case Subcommand::verify: code = run_verify_cmd(config, w, log); break;
    }
    w.finish();
    return code;
}

int main_entry(const std::vector<std::string>& args, std::ostream& log, std::ostream& err) {
    try {
        return run(parse_config(args), log);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return e.exit_code;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const CapExceeded& e) {
        err << "config error: " << e.what() << '\n';
        return exit_out_of_range;
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << '\n';
        return exit_out_of_range;
    } catch (const ConvergenceError& e) {
        err << "numeric error: " << e.what() << '\n';
        return exit_numeric;
    } catch (const std::exception& e) {
        err << "numeric error: " << e.what() << '\n';
        return exit_numeric;
    }
}

}  // namespace bandspec::cli
