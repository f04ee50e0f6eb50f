#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "lobfract/book.hpp"
#include "lobfract/dfa.hpp"
#include "lobfract/durations.hpp"
#include "lobfract/econ.hpp"
#include "lobfract/events.hpp"
#include "lobfract/io.hpp"
#include "lobfract/reference.hpp"
#include "lobfract/synth.hpp"

namespace lobfract {

// ---------------------------------------------------------------------------
// formatting / hashing helpers
// ---------------------------------------------------------------------------

/// Fixed 12-significant-digit float formatting; product files must be
/// byte-identical across reruns.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 14695981039346656037ull) {
    return fnv1a(s.data(), s.size(), h);
}

inline std::string to_hex(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string file_checksum_hex(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + p.string());
    std::string data(std::istreambuf_iterator<char>(in), {});
    return to_hex(fnv1a(data.data(), data.size()));
}

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

struct RunConfig {
    std::string input_dir;            // directory of <stock>_<yyyymmdd>.(csv|lob) files
    std::vector<std::string> stocks;  // empty = all stocks found
    SessionWindow window{0, kMsPerDay, 0};
    std::map<std::string, SessionWindow> per_stock_windows;

    std::vector<Variable> variables{kAllVariables, kAllVariables + 5};
    std::vector<Side> sides{Side::ASK, Side::BID};

    ExtractOptions extract;
    DfaConfig dfa;
    bool fit_band_intra = false; // daily fit restricted to the intra-day band

    int rv_grid_seconds = 300;
    int rv_offsets = 30;

    std::string out_dir = "out";
    int jobs = 1;
    std::uint64_t seed = 0;
    bool use_cache = true;
};

namespace detail {

inline std::int64_t parse_clock_ms(const std::string& s) {
    // "hh:mm", "hh:mm:ss" or plain milliseconds
    if (s.find(':') == std::string::npos) return std::stoll(s);
    int h = 0, m = 0, sec = 0;
    if (std::sscanf(s.c_str(), "%d:%d:%d", &h, &m, &sec) < 2)
        throw ConfigError("bad clock time: " + s);
    return ((h * 60ll + m) * 60ll + sec) * 1000ll;
}

inline std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

inline bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("bad boolean: " + s);
}

} // namespace detail

/// Parse the sectioned key=value config file. Unknown keys are rejected so
/// typos surface at validation time.
inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("bad section at line " + std::to_string(lineno));
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value at line " + std::to_string(lineno));
        auto strip = [](std::string s) {
            const auto sb = s.find_first_not_of(" \t");
            const auto se = s.find_last_not_of(" \t");
            return sb == std::string::npos ? std::string{} : s.substr(sb, se - sb + 1);
        };
        const std::string key = section + "." + strip(line.substr(0, eq));
        const std::string val = strip(line.substr(eq + 1));

        if (key == "input.dir") cfg.input_dir = val;
        else if (key == "input.stocks") cfg.stocks = detail::split_csv_list(val);
        else if (key == "session.open") cfg.window.open_ms = detail::parse_clock_ms(val);
        else if (key == "session.close") cfg.window.close_ms = detail::parse_clock_ms(val);
        else if (key == "session.trim") cfg.window.trim_ms = detail::parse_clock_ms(val);
        else if (key == "variables.set") {
            cfg.variables.clear();
            for (const auto& name : detail::split_csv_list(val)) {
                Variable v;
                if (!variable_from_string(name, v)) throw ConfigError("unknown variable " + name);
                cfg.variables.push_back(v);
            }
        } else if (key == "variables.sides") {
            cfg.sides.clear();
            for (const auto& name : detail::split_csv_list(val)) {
                if (name == "ASK") cfg.sides.push_back(Side::ASK);
                else if (name == "BID") cfg.sides.push_back(Side::BID);
                else throw ConfigError("unknown side " + name);
            }
        } else if (key == "durations.drop_zeros") cfg.extract.drop_zeros = detail::parse_bool(val);
        else if (key == "durations.deletes_are_cancels")
            cfg.extract.deletes_are_cancels = detail::parse_bool(val);
        else if (key == "durations.best_only") {
            cfg.extract.best_only_or_or = cfg.extract.best_only_tr_tr =
                cfg.extract.best_only_ca_ca = false;
            for (const auto& name : detail::split_csv_list(val)) {
                if (name == "or-or") cfg.extract.best_only_or_or = true;
                else if (name == "tr-tr") cfg.extract.best_only_tr_tr = true;
                else if (name == "ca-ca") cfg.extract.best_only_ca_ca = true;
                else throw ConfigError("best_only supports inter-event variables, got " + name);
            }
        } else if (key == "dfa.order") cfg.dfa.detrend_order = std::stoi(val);
        else if (key == "dfa.s_min") cfg.dfa.s_min = std::stoll(val);
        else if (key == "dfa.per_decade") cfg.dfa.scales_per_decade = std::stoi(val);
        else if (key == "dfa.both_ends") cfg.dfa.both_ends = detail::parse_bool(val);
        else if (key == "dfa.min_length") cfg.dfa.min_length = std::stoul(val);
        else if (key == "dfa.fit_band") {
            if (val == "intra") cfg.fit_band_intra = true;
            else if (val == "full") cfg.fit_band_intra = false;
            else throw ConfigError("fit_band must be intra or full");
        } else if (key == "econ.rv_grid_seconds") cfg.rv_grid_seconds = std::stoi(val);
        else if (key == "econ.rv_offsets") cfg.rv_offsets = std::stoi(val);
        else if (key == "output.dir") cfg.out_dir = val;
        else if (key == "run.jobs") cfg.jobs = std::stoi(val);
        else if (key == "run.seed") cfg.seed = std::stoull(val);
        else if (key == "run.cache") cfg.use_cache = detail::parse_bool(val);
        else throw ConfigError("unknown config key " + key);
    }
    if (cfg.dfa.detrend_order < 1 || cfg.dfa.detrend_order > 3)
        throw ConfigError("dfa.order must be 1..3");
    cfg.window.validate();
    return cfg;
}

inline RunConfig parse_config_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open config " + p.string());
    return parse_config(in);
}

// ---------------------------------------------------------------------------
// input discovery
// ---------------------------------------------------------------------------

struct DayInput {
    std::filesystem::path path;
    std::string stock;
    std::string day; // yyyymmdd
    bool binary = false;
};

/// Find <stock>_<yyyymmdd>.(csv|lob) files, sorted by (stock, day).
inline std::vector<DayInput> discover_inputs(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(cfg.input_dir))
        throw ConfigError("input.dir is not a directory: " + cfg.input_dir);
    std::vector<DayInput> out;
    for (const auto& entry : fs::directory_iterator(cfg.input_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        const std::string ext = entry.path().extension().string();
        if (ext != ".csv" && ext != ".lob") continue;
        const std::string stem = entry.path().stem().string();
        const auto us = stem.rfind('_');
        if (us == std::string::npos || stem.size() - us - 1 != 8) continue;
        const std::string day = stem.substr(us + 1);
        if (day.find_first_not_of("0123456789") != std::string::npos) continue;
        DayInput di{entry.path(), stem.substr(0, us), day, ext == ".lob"};
        if (!cfg.stocks.empty() &&
            std::find(cfg.stocks.begin(), cfg.stocks.end(), di.stock) == cfg.stocks.end())
            continue;
        out.push_back(std::move(di));
    }
    std::sort(out.begin(), out.end(), [](const DayInput& a, const DayInput& b) {
        return std::tie(a.stock, a.day) < std::tie(b.stock, b.day);
    });
    return out;
}

// ---------------------------------------------------------------------------
// per-day processing
// ---------------------------------------------------------------------------

struct SeriesKey {
    std::string stock;
    Side side;
    Variable variable;
    bool operator<(const SeriesKey& o) const {
        return std::tie(stock, side, variable) < std::tie(o.stock, o.side, o.variable);
    }
};

struct DayOutput {
    DayInput input;
    std::string error; // nonempty when the whole day was skipped
    std::map<std::pair<Side, Variable>, DurationSeries> series;
    std::map<std::pair<Side, Variable>, DailyEcon> econ;
    std::map<std::pair<Side, Variable>, std::string> econ_errors;
};

namespace detail {

inline std::string extract_flags_fingerprint(const RunConfig& cfg) {
    std::ostringstream ss;
    ss << cfg.window.lo() << '|' << cfg.window.hi() << '|' << cfg.extract.drop_zeros << '|'
       << cfg.extract.deletes_are_cancels << '|' << cfg.extract.best_only_or_or << '|'
       << cfg.extract.best_only_tr_tr << '|' << cfg.extract.best_only_ca_ca << '|'
       << cfg.rv_grid_seconds << '|' << cfg.rv_offsets;
    return ss.str();
}

inline SessionWindow window_for(const RunConfig& cfg, const std::string& stock) {
    auto it = cfg.per_stock_windows.find(stock);
    return it == cfg.per_stock_windows.end() ? cfg.window : it->second;
}

} // namespace detail

/// Parse, filter, replay and extract one day. Cached as JSON keyed by the
/// input checksum and the extraction-relevant flags.
inline DayOutput process_day(const DayInput& input, const RunConfig& cfg) {
    namespace fs = std::filesystem;
    DayOutput out;
    out.input = input;
    try {
        std::ifstream in(input.path, std::ios::binary);
        if (!in) throw ConfigError("cannot open " + input.path.string());
        std::string raw(std::istreambuf_iterator<char>(in), {});

        fs::path cache_file;
        if (cfg.use_cache) {
            const std::uint64_t key =
                fnv1a(detail::extract_flags_fingerprint(cfg), fnv1a(raw.data(), raw.size()));
            cache_file = fs::path(cfg.out_dir) / "cache" /
                         (input.stock + "_" + input.day + "_" + to_hex(key) + ".json");
            if (fs::exists(cache_file)) {
                std::ifstream cin(cache_file);
                nlohmann::json j = nlohmann::json::parse(cin);
                for (const auto& item : j["series"]) {
                    DurationSeries s;
                    s.stock_id = input.stock;
                    s.day = input.day;
                    s.side = static_cast<Side>(item["side"].get<int>());
                    s.variable = static_cast<Variable>(item["variable"].get<int>());
                    s.values = item["values"].get<std::vector<std::int64_t>>();
                    const auto k = std::make_pair(s.side, s.variable);
                    out.series[k] = std::move(s);
                    if (item.contains("econ")) {
                        const auto& ej = item["econ"];
                        DailyEcon e;
                        e.stock_id = input.stock;
                        e.day = input.day;
                        e.side = static_cast<Side>(item["side"].get<int>());
                        e.variable = static_cast<Variable>(item["variable"].get<int>());
                        e.avg_duration_ms = ej["avg_duration_ms"];
                        e.activity = ej["activity"];
                        e.avg_quantity = ej["avg_quantity"];
                        e.daily_log_return = ej["daily_log_return"];
                        e.realized_var = ej["realized_variance"];
                        out.econ[k] = std::move(e);
                    } else {
                        out.econ_errors[k] = item.value("econ_error", "unavailable");
                    }
                }
                return out;
            }
        }

        std::istringstream stream(raw);
        std::vector<EventRecord> events =
            input.binary ? parse_binary_log(stream) : parse_csv_log(stream);
        const SessionWindow window = detail::window_for(cfg, input.stock);
        events = apply_session_filter(events, window);
        const std::vector<ClassifiedEvent> classified = replay_day(events);
        const std::vector<MidPoint> mids = mid_price_path(events);

        nlohmann::json jseries = nlohmann::json::array();
        for (Side side : {Side::ASK, Side::BID}) {
            for (Variable v : kAllVariables) {
                DurationSeries s = extract_variable(classified, v, side, cfg.extract);
                s.stock_id = input.stock;
                s.day = input.day;
                const auto k = std::make_pair(side, v);
                nlohmann::json item{{"side", static_cast<int>(side)},
                                    {"variable", static_cast<int>(v)},
                                    {"values", s.values}};
                try {
                    const DailyEcon e = daily_economics(s, events, mids, window,
                                                        cfg.rv_grid_seconds, cfg.rv_offsets);
                    item["econ"] = {{"avg_duration_ms", e.avg_duration_ms},
                                    {"activity", e.activity},
                                    {"avg_quantity", e.avg_quantity},
                                    {"daily_log_return", e.daily_log_return},
                                    {"realized_variance", e.realized_var}};
                    out.econ[k] = e;
                } catch (const Error& e) {
                    item["econ_error"] = e.what();
                    out.econ_errors[k] = e.what();
                }
                out.series[k] = std::move(s);
                jseries.push_back(std::move(item));
            }
        }

        if (cfg.use_cache) {
            fs::create_directories(cache_file.parent_path());
            std::ofstream cout_(cache_file);
            cout_ << nlohmann::json{{"series", jseries}};
        }
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

/// Fan the day list out over a bounded worker pool; results land in input
/// order so downstream reductions are deterministic.
inline std::vector<DayOutput> process_days(const std::vector<DayInput>& inputs,
                                           const RunConfig& cfg) {
    std::vector<DayOutput> outputs(inputs.size());
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (std::size_t i = 0; i < inputs.size(); ++i) outputs[i] = process_day(inputs[i], cfg);
        return outputs;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= inputs.size()) return;
                outputs[i] = process_day(inputs[i], cfg);
            }
        });
    for (auto& t : workers) t.join();
    return outputs;
}

// ---------------------------------------------------------------------------
// report / products
// ---------------------------------------------------------------------------

enum class RunStatus { CLEAN = 0, FAILED = 1, PARTIAL = 2 };

struct RunReport {
    RunStatus status = RunStatus::CLEAN;
    std::vector<std::filesystem::path> products;
    std::vector<std::pair<std::string, std::string>> skipped; // day-level data errors
    std::vector<std::pair<std::string, std::string>> short_series; // per-series skips, not fatal
    std::filesystem::path manifest_path;
};

namespace detail {

inline const char* econ_field_names[] = {"avg_duration_ms", "activity", "avg_quantity",
                                         "daily_log_return", "realized_variance"};

inline double econ_field(const DailyEcon& e, int idx) {
    switch (idx) {
        case 0: return e.avg_duration_ms;
        case 1: return static_cast<double>(e.activity);
        case 2: return e.avg_quantity;
        case 3: return e.daily_log_return;
        case 4: return e.realized_var;
    }
    return 0.0;
}

} // namespace detail

/// Full pipeline: ingest, replay, durations, daily DFA, concatenated-curve
/// local exponents, economics, correlations, manifest.
inline RunReport run_pipeline(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    RunReport report;
    const std::vector<DayInput> inputs = discover_inputs(cfg);
    if (inputs.empty()) throw ConfigError("no input files found in " + cfg.input_dir);
    fs::create_directories(cfg.out_dir);
    fs::create_directories(fs::path(cfg.out_dir) / "curves");

    const std::vector<DayOutput> days = process_days(inputs, cfg);

    // Per-day duration series grouped by (stock, side, variable), day order.
    std::map<SeriesKey, std::vector<const DurationSeries*>> grouped;
    std::map<SeriesKey, std::vector<const DailyEcon*>> grouped_econ;
    for (const auto& d : days) {
        if (!d.error.empty()) {
            report.skipped.emplace_back(d.input.stock + "_" + d.input.day, d.error);
            continue;
        }
        for (const auto& [k, s] : d.series) {
            if (std::find(cfg.sides.begin(), cfg.sides.end(), k.first) == cfg.sides.end())
                continue;
            if (std::find(cfg.variables.begin(), cfg.variables.end(), k.second) ==
                cfg.variables.end())
                continue;
            const SeriesKey key{d.input.stock, k.first, k.second};
            grouped[key].push_back(&s);
            auto it = d.econ.find(k);
            grouped_econ[key].push_back(it == d.econ.end() ? nullptr : &it->second);
        }
    }

    auto add_product = [&](const fs::path& p) { report.products.push_back(p); };

    // --- daily alphas -------------------------------------------------------
    std::map<SeriesKey, std::vector<std::pair<std::size_t, ScalingFit>>> daily_fits;
    {
        std::ofstream out(fs::path(cfg.out_dir) / "daily_alphas.csv");
        out << "stock,day,side,variable,n_values,alpha,stderr_alpha,r_squared,n_points\n";
        for (const auto& [key, series_list] : grouped) {
            for (std::size_t di = 0; di < series_list.size(); ++di) {
                const DurationSeries& s = *series_list[di];
                try {
                    DfaConfig dcfg = cfg.dfa;
                    ScalingFit fit;
                    if (cfg.fit_band_intra) {
                        std::vector<double> x(s.values.begin(), s.values.end());
                        const auto n = static_cast<std::int64_t>(x.size());
                        if (s.n() < dcfg.min_length)
                            throw SeriesTooShort("length " + std::to_string(s.n()));
                        const auto scales = scale_grid(dcfg.s_min, n / 4, dcfg.scales_per_decade);
                        FluctuationCurve c =
                            fluctuation(x, scales, dcfg.detrend_order, dcfg.both_ends);
                        c.normalization = static_cast<double>(n);
                        fit = fit_alpha(c, kBand1Lo, kBand1Hi, true);
                    } else {
                        fit = daily_alpha(s, dcfg);
                    }
                    daily_fits[key].emplace_back(di, fit);
                    out << key.stock << ',' << s.day << ',' << to_string(key.side) << ','
                        << to_string(key.variable) << ',' << s.n() << ','
                        << format_double(fit.alpha) << ',' << format_double(fit.stderr_alpha)
                        << ',' << format_double(fit.r_squared) << ',' << fit.n_points << '\n';
                } catch (const Error& e) {
                    report.short_series.emplace_back(key.stock + "_" + s.day + "_" +
                                                         to_string(key.side) + "_" +
                                                         to_string(key.variable),
                                                     e.what());
                }
            }
        }
        add_product(fs::path(cfg.out_dir) / "daily_alphas.csv");
    }

    // --- alpha summary ------------------------------------------------------
    {
        std::ofstream out(fs::path(cfg.out_dir) / "alpha_summary.csv");
        out << "stock,side,variable,n_days,mean_alpha,std_alpha,ci95_half_width\n";
        for (const auto& [key, fits] : daily_fits) {
            if (fits.size() < 2) continue;
            std::vector<ScalingFit> plain;
            plain.reserve(fits.size());
            for (const auto& [_, f] : fits) plain.push_back(f);
            const AlphaSummary sum = summarize_alphas(plain);
            out << key.stock << ',' << to_string(key.side) << ',' << to_string(key.variable)
                << ',' << sum.n_days << ',' << format_double(sum.mean) << ','
                << format_double(sum.std_dev) << ',' << format_double(sum.ci95_half_width)
                << '\n';
        }
        add_product(fs::path(cfg.out_dir) / "alpha_summary.csv");
    }

    // --- concatenated curves + local alphas ---------------------------------
    {
        std::ofstream locals(fs::path(cfg.out_dir) / "local_alphas.csv");
        locals << "stock,side,variable,band,range_lo,range_hi,alpha,stderr_alpha,n_points,status\n";
        for (const auto& [key, series_list] : grouped) {
            std::vector<DurationSeries> copies;
            copies.reserve(series_list.size());
            double qualifying = 0.0;
            std::size_t active_days = 0;
            for (const auto* s : series_list) {
                copies.push_back(*s);
                if (s->n() > 0) {
                    qualifying += static_cast<double>(s->n()) + (is_lifetime(key.variable) ? 0 : 1);
                    ++active_days;
                }
            }
            DurationSeries all = concat_days(copies);
            if (all.n() < cfg.dfa.min_length || active_days == 0) continue;
            std::vector<double> x(all.values.begin(), all.values.end());
            const auto n = static_cast<std::int64_t>(x.size());
            const auto scales = scale_grid(cfg.dfa.s_min, n / 4, cfg.dfa.scales_per_decade);
            FluctuationCurve curve =
                fluctuation(x, scales, cfg.dfa.detrend_order, cfg.dfa.both_ends);
            curve.normalization = qualifying / static_cast<double>(active_days);

            const fs::path curve_path =
                fs::path(cfg.out_dir) / "curves" /
                ("fluct_" + key.stock + "_" + to_string(key.side) + "_" +
                 std::string(to_string(key.variable)) + ".csv");
            {
                std::ofstream cout_(curve_path);
                cout_ << "scale,normalized_scale,fluctuation\n";
                for (std::size_t i = 0; i < curve.scales.size(); ++i)
                    cout_ << curve.scales[i] << ','
                          << format_double(static_cast<double>(curve.scales[i]) /
                                           *curve.normalization)
                          << ',' << format_double(curve.fluctuations[i]) << '\n';
            }
            add_product(curve_path);

            const LocalAlphas la = local_alphas(curve);
            auto emit = [&](const char* band, double lo, double hi, const BandFit& bf) {
                locals << key.stock << ',' << to_string(key.side) << ','
                       << to_string(key.variable) << ',' << band << ',' << format_double(lo)
                       << ',' << format_double(hi) << ',';
                if (bf.fit)
                    locals << format_double(bf.fit->alpha) << ','
                           << format_double(bf.fit->stderr_alpha) << ',' << bf.fit->n_points
                           << ",ok\n";
                else
                    locals << ",,0," << bf.error << '\n';
            };
            emit("alpha1", kBand1Lo, kBand1Hi, la.alpha1);
            emit("alpha2", kBand2Lo, kBand2Hi, la.alpha2);
            emit("alpha3", kBand3Lo, kBand3Hi, la.alpha3);
        }
        add_product(fs::path(cfg.out_dir) / "local_alphas.csv");
    }

    // --- daily economics ----------------------------------------------------
    {
        std::ofstream out(fs::path(cfg.out_dir) / "daily_econ.csv");
        out << "stock,day,side,variable,avg_duration_ms,activity,avg_quantity,daily_log_return,"
               "realized_variance\n";
        for (const auto& [key, econ_list] : grouped_econ) {
            for (const auto* e : econ_list) {
                if (!e) continue;
                out << e->stock_id << ',' << e->day << ',' << to_string(e->side) << ','
                    << to_string(e->variable) << ',' << format_double(e->avg_duration_ms) << ','
                    << e->activity << ',' << format_double(e->avg_quantity) << ','
                    << format_double(e->daily_log_return) << ','
                    << format_double(e->realized_var) << '\n';
            }
        }
        add_product(fs::path(cfg.out_dir) / "daily_econ.csv");
    }

    // --- correlations -------------------------------------------------------
    {
        std::ofstream out(fs::path(cfg.out_dir) / "correlations.csv");
        out << "stock,side,variable,econ_variable,r,n,r_critical,significant_99\n";
        for (const auto& [key, fits] : daily_fits) {
            const auto& econ_list = grouped_econ[key];
            for (int field = 0; field < 5; ++field) {
                std::vector<double> xs, ys;
                for (const auto& [day_index, fit] : fits) {
                    const DailyEcon* e = day_index < econ_list.size() ? econ_list[day_index]
                                                                      : nullptr;
                    if (!e) continue; // pairwise drop of days missing either side
                    xs.push_back(fit.alpha);
                    ys.push_back(detail::econ_field(*e, field));
                }
                try {
                    const CorrelationResult r = correlate(xs, ys);
                    out << key.stock << ',' << to_string(key.side) << ','
                        << to_string(key.variable) << ',' << detail::econ_field_names[field]
                        << ',' << format_double(r.r) << ',' << r.n << ','
                        << format_double(r.r_critical) << ',' << (r.significant_99 ? 1 : 0)
                        << '\n';
                } catch (const Error&) {
                    // not enough paired days or degenerate input; row omitted
                }
            }
        }
        add_product(fs::path(cfg.out_dir) / "correlations.csv");
    }

    // --- manifest -----------------------------------------------------------
    {
        nlohmann::json manifest;
        manifest["status"] = report.skipped.empty() ? "clean" : "partial";
        nlohmann::json files = nlohmann::json::array();
        for (const auto& p : report.products)
            files.push_back({{"path", fs::relative(p, cfg.out_dir).string()},
                             {"checksum", file_checksum_hex(p)}});
        manifest["products"] = files;
        nlohmann::json skipped = nlohmann::json::array();
        for (const auto& [what, why] : report.skipped)
            skipped.push_back({{"item", what}, {"reason", why}});
        manifest["skipped"] = skipped;
        nlohmann::json shorts = nlohmann::json::array();
        for (const auto& [what, why] : report.short_series)
            shorts.push_back({{"item", what}, {"reason", why}});
        manifest["short_series"] = shorts;
        report.manifest_path = fs::path(cfg.out_dir) / "manifest.json";
        std::ofstream out(report.manifest_path);
        out << manifest.dump(2) << '\n';
    }

    report.status = report.skipped.empty() ? RunStatus::CLEAN : RunStatus::PARTIAL;
    return report;
}

// ---------------------------------------------------------------------------
// synthetic corpus + book dump + validation suite
// ---------------------------------------------------------------------------

/// yyyymmdd successor, for naming fabricated trading days.
inline std::string next_day_string(const std::string& day) {
    int y = std::stoi(day.substr(0, 4));
    int m = std::stoi(day.substr(4, 2));
    int d = std::stoi(day.substr(6, 2));
    static const int mdays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int dim = mdays[m - 1];
    if (m == 2 && (y % 4 == 0 && (y % 100 != 0 || y % 400 == 0))) dim = 29;
    if (++d > dim) {
        d = 1;
        if (++m > 12) {
            m = 1;
            ++y;
        }
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d%02d%02d", y, m, d);
    return buf;
}

struct CorpusSpec {
    std::string stock = "SYN1";
    std::string first_day = "20100601";
    std::size_t n_days = 10;
    std::size_t events_per_day = 4096;
    Variable variable = Variable::TR_TR;
    Side side = Side::BID;
    bool iid_exponential = false;
    double hurst = 0.68;
    double mean_duration_ms = 1000.0;
    double log_sigma = 0.1;
    SessionWindow window{0, kMsPerDay, 0};
    std::uint64_t seed = 1;
    bool binary = false;
};

/// Write one canonical log per fabricated day under `dir`.
inline std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& dir,
                                                       const CorpusSpec& spec) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<fs::path> files;
    std::string day = spec.first_day;
    for (std::size_t i = 0; i < spec.n_days; ++i) {
        OrderFlowSpec ofs;
        ofs.variable = spec.variable;
        ofs.side = spec.side;
        ofs.iid_exponential = spec.iid_exponential;
        ofs.gen = {SignalKind::FGN, spec.hurst, spec.events_per_day, spec.seed + i};
        ofs.mean_duration_ms = spec.mean_duration_ms;
        ofs.log_sigma = spec.log_sigma;
        ofs.n_events = spec.events_per_day;
        ofs.window = spec.window;
        const std::vector<EventRecord> events = synth_order_flow(ofs);
        const fs::path p = dir / (spec.stock + "_" + day + (spec.binary ? ".lob" : ".csv"));
        std::ofstream out(p, std::ios::binary);
        if (spec.binary) encode_binary_log(out, events);
        else write_csv_log(out, events);
        files.push_back(p);
        day = next_day_string(day);
    }
    return files;
}

inline nlohmann::json book_to_json(const BookState& book) {
    nlohmann::json j;
    auto ladder_json = [](const BookState::Ladder& lad) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& [price, qty] : lad) out.push_back({{"price", price}, {"quantity", qty}});
        return out;
    };
    j["bids"] = ladder_json(book.bid_ladder());
    j["asks"] = ladder_json(book.ask_ladder());
    if (book.best_bid()) j["best_bid"] = *book.best_bid();
    if (book.best_ask()) j["best_ask"] = *book.best_ask();
    j["live_orders"] = book.live_orders().size();
    return j;
}

struct ValidationCheck {
    std::string name;
    double expected = 0.0;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Seeded self-checks: exponent recovery for the three reference signals
/// plus equivalence of the optimized and reference fluctuation paths.
inline std::vector<ValidationCheck> validate_suite(std::uint64_t seed = 7,
                                                   std::size_t n = 1 << 15, int n_seeds = 8) {
    std::vector<ValidationCheck> checks;
    auto mean_alpha = [&](SignalKind kind, double hurst) {
        double sum = 0.0;
        for (int i = 0; i < n_seeds; ++i) {
            const std::vector<double> sig =
                generate({kind, hurst, n, seed + static_cast<std::uint64_t>(i)});
            const auto scales = scale_grid(8, static_cast<std::int64_t>(n) / 4);
            const FluctuationCurve c = fluctuation(sig, scales, 1);
            sum += fit_alpha(c, 0.0, static_cast<double>(c.scales.back())).alpha;
        }
        return sum / n_seeds;
    };
    auto push = [&](const std::string& name, double expected, double measured, double tol) {
        checks.push_back({name, expected, measured, tol, std::abs(measured - expected) <= tol});
    };

    push("white noise alpha", 0.5, mean_alpha(SignalKind::WHITE, 0.5), 0.05);
    push("integrated white noise alpha", 1.5,
         mean_alpha(SignalKind::BROWNIAN_INCREMENTS_INTEGRATED, 0.5), 0.05);
    push("fGn(H=0.7) alpha", 0.7, mean_alpha(SignalKind::FGN, 0.7), 0.05);

    double worst = 0.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t len = 256 + static_cast<std::size_t>(rng() % 1793);
        std::vector<double> series(len);
        for (auto& x : series) x = unif(rng);
        const auto scales = scale_grid(8, static_cast<std::int64_t>(len) / 4);
        const FluctuationCurve fast = fluctuation(series, scales, 1);
        const FluctuationCurve ref = reference::fluctuation(series, scales, 1);
        for (std::size_t i = 0; i < scales.size(); ++i) {
            const double rel = std::abs(fast.fluctuations[i] - ref.fluctuations[i]) /
                               std::max(ref.fluctuations[i], 1e-300);
            worst = std::max(worst, rel);
        }
    }
    push("oracle equivalence (max rel err)", 0.0, worst, 1e-10);
    return checks;
}

} // namespace lobfract
