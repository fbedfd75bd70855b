#include "megn/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "megn/csv.hpp"

namespace megn {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

using Sections = std::map<std::string, std::map<std::string, std::string>>;

Sections parse_sections(const std::string& text) {
    Sections out;
    std::string section = "";
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                     ": empty key");
        if (!out[section].insert({key, value}).second)
            throw std::invalid_argument("duplicate config key: [" + section + "] " + key);
    }
    return out;
}

class Reader {
public:
    explicit Reader(const Sections& s) : sections_(s) {}

    bool has(const std::string& sec, const std::string& key) const {
        auto it = sections_.find(sec);
        return it != sections_.end() && it->second.count(key) > 0;
    }
    std::string raw(const std::string& sec, const std::string& key) const {
        return sections_.at(sec).at(key);
    }
    double num(const std::string& sec, const std::string& key, double fallback) const {
        if (!has(sec, key)) return fallback;
        return parse_num(sec, key, raw(sec, key));
    }
    int integer(const std::string& sec, const std::string& key, int fallback) const {
        double v = num(sec, key, fallback);
        int i = static_cast<int>(v);
        if (v != i) throw std::invalid_argument("config [" + sec + "] " + key + ": expected an integer");
        return i;
    }
    bool flag(const std::string& sec, const std::string& key, bool fallback) const {
        if (!has(sec, key)) return fallback;
        std::string v = raw(sec, key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw std::invalid_argument("config [" + sec + "] " + key + ": expected a boolean");
    }
    std::string text(const std::string& sec, const std::string& key,
                     const std::string& fallback) const {
        return has(sec, key) ? raw(sec, key) : fallback;
    }

    // comma list of numbers with a .. range form for integers (e.g. 1..20)
    std::vector<double> list(const std::string& sec, const std::string& key) const {
        std::vector<double> out;
        if (!has(sec, key)) return out;
        std::stringstream ss(raw(sec, key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            auto dots = item.find("..");
            if (dots != std::string::npos) {
                int lo = static_cast<int>(parse_num(sec, key, item.substr(0, dots)));
                int hi = static_cast<int>(parse_num(sec, key, item.substr(dots + 2)));
                if (hi < lo) throw std::invalid_argument("config [" + sec + "] " + key +
                                                         ": descending range");
                for (int v = lo; v <= hi; ++v) out.push_back(v);
            } else {
                out.push_back(parse_num(sec, key, item));
            }
        }
        return out;
    }
    std::vector<std::string> words(const std::string& sec, const std::string& key) const {
        std::vector<std::string> out;
        if (!has(sec, key)) return out;
        std::stringstream ss(raw(sec, key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

private:
    double parse_num(const std::string& sec, const std::string& key, const std::string& v) const {
        char* end = nullptr;
        double x = std::strtod(v.c_str(), &end);
        if (end == v.c_str() || *end != '\0')
            throw std::invalid_argument("config [" + sec + "] " + key + ": cannot parse '" + v + "'");
        return x;
    }
    const Sections& sections_;
};

std::string canonical_text(const Sections& sections) {
    std::string out;
    for (const auto& [sec, kv] : sections) {
        out += "[" + sec + "]\n";
        for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    }
    return out;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::size_t SweepSpec::grid_size() const {
    auto dim = [](std::size_t n) { return n == 0 ? 1 : n; };
    return dim(blocklengths.size()) * dim(mappings.size()) * dim(symbol_rates_gbd.size()) *
           dim(spans.size()) * dim(memories.size());
}

void SweepSpec::validate() const {
    for (int n : blocklengths)
        if (n < 4 || n % 4 != 0)
            throw std::invalid_argument("sweep blocklength must be a positive multiple of 4");
    for (int h : mappings)
        if (h != 1 && h != 2 && h != 4)
            throw std::invalid_argument("sweep mapping must be one of 1, 2, 4");
    for (double rs : symbol_rates_gbd)
        if (rs <= 0.0) throw std::invalid_argument("sweep symbol_rate_gbd must be positive");
    for (int ns : spans)
        if (ns < 1) throw std::invalid_argument("sweep spans must be >= 1");
    for (int mm : memories)
        if (mm < 1) throw std::invalid_argument("sweep memory must be >= 1");
    static const std::vector<std::string> known = {"eta", "psd", "snr", "covariances", "kernels"};
    for (const std::string& o : outputs)
        if (std::find(known.begin(), known.end(), o) == known.end())
            throw std::invalid_argument("unknown sweep output: " + o);
    if (workers < 0) throw std::invalid_argument("workers must be >= 0");
}

Experiment experiment_from_text(const std::string& text) {
    Sections sections = parse_sections(text);
    Reader r(sections);
    Experiment e;

    e.link.alpha_db_per_km = r.num("link", "alpha_db_per_km", e.link.alpha_db_per_km);
    e.link.dispersion_ps_nm_km = r.num("link", "dispersion_ps_nm_km", e.link.dispersion_ps_nm_km);
    e.link.gamma_per_w_km = r.num("link", "gamma_per_w_km", e.link.gamma_per_w_km);
    e.link.span_length_km = r.num("link", "span_length_km", e.link.span_length_km);
    e.link.num_spans = r.integer("link", "num_spans", e.link.num_spans);
    e.link.center_wavelength_nm = r.num("link", "center_wavelength_nm", e.link.center_wavelength_nm);
    e.link.edfa_noise_figure_db = r.num("link", "edfa_noise_figure_db", e.link.edfa_noise_figure_db);
    e.link.validate();

    e.pulse.symbol_rate_hz = r.num("pulse", "symbol_rate_gbd", 32.0) * 1e9;
    e.pulse.rolloff = r.num("pulse", "rolloff", e.pulse.rolloff);
    e.pulse.validate();

    std::vector<double> pmf = r.list("shaping", "pmf");
    std::vector<double> alphabet = r.list("shaping", "alphabet");
    if (pmf.empty()) pmf = {0.4, 0.3, 0.2, 0.1};
    if (alphabet.empty()) alphabet = {1.0, 3.0, 5.0, 7.0};
    int blocklength = r.integer("shaping", "blocklength", 100);
    e.shaping.composition = make_composition(pmf, alphabet, blocklength);
    e.shaping.mapping_h = r.integer("shaping", "mapping", 4);

    e.sim.oversampling = r.integer("sim", "oversampling", e.sim.oversampling);
    e.sim.step_km = r.num("sim", "step_km", e.sim.step_km);
    e.sim.num_symbols = static_cast<std::size_t>(r.num("sim", "num_symbols",
                                                       static_cast<double>(e.sim.num_symbols)));
    e.sim.num_runs = r.integer("sim", "num_runs", e.sim.num_runs);
    e.sim.seed = static_cast<std::uint64_t>(r.num("sim", "seed", 1.0));
    e.sim.ase_enabled = r.flag("sim", "ase", e.sim.ase_enabled);
    e.sim.launch_power_dbm = r.num("sim", "launch_power_dbm", e.sim.launch_power_dbm);
    e.sim.guard_symbols = r.integer("sim", "guard_symbols", e.sim.guard_symbols);
    e.sim.validate(e.link);

    e.shaping.power_w = e.sim.launch_power_w();
    e.shaping.validate();

    e.model.memory = r.integer("model", "memory", e.model.memory);
    e.model.mode = model_mode_from_string(r.text("model", "mode", "approx"));
    e.model.psd_points = r.integer("model", "psd_points", e.model.psd_points);
    e.model.exploit_symmetry = r.flag("model", "exploit_symmetry", true);
    e.model.quad.points_per_axis = r.integer("model", "quad_points", 401);
    e.model.quad.integration_bound_hz = r.num("model", "quad_bound_ghz", 0.0) * 1e9;
    e.model.quad.singular_refinement = r.integer("model", "singular_refinement", 1);
    e.model.validate();

    auto as_int = [](const std::vector<double>& v) {
        std::vector<int> out;
        for (double x : v) out.push_back(static_cast<int>(x));
        return out;
    };
    e.sweep.blocklengths = as_int(r.list("sweep", "blocklength"));
    e.sweep.mappings = as_int(r.list("sweep", "mapping"));
    e.sweep.symbol_rates_gbd = r.list("sweep", "symbol_rate_gbd");
    e.sweep.spans = as_int(r.list("sweep", "spans"));
    e.sweep.memories = as_int(r.list("sweep", "memory"));
    if (r.has("sweep", "outputs")) e.sweep.outputs = r.words("sweep", "outputs");
    e.sweep.compare_sim = r.flag("sweep", "compare_sim", false);
    e.sweep.workers = r.integer("sweep", "workers", 0);
    e.sweep.validate();

    e.config_hash = fnv1a_hex(canonical_text(sections));
    return e;
}

Experiment load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return experiment_from_text(ss.str());
}

std::string Experiment::describe() const {
    std::ostringstream os;
    os << "config " << config_hash << " (" << artifact_version << ")\n";
    os << "  link: alpha " << link.alpha_np_per_m() * 1e3 << " Np/km (field), beta2 "
       << link.beta2_s2_per_m() << " s^2/m, gamma " << link.gamma_per_w_m() << " 1/W/m\n";
    os << "  link: " << link.num_spans << " x " << link.span_length_km
       << " km spans, span gain " << linear_to_db(link.span_gain_linear()) << " dB, carrier "
       << link.carrier_freq_hz() * 1e-12 << " THz\n";
    os << "  pulse: Rs " << pulse.symbol_rate_hz * 1e-9 << " GBd, rolloff " << pulse.rolloff
       << ", band " << 2.0 * pulse.max_freq_hz() * 1e-9 << " GHz\n";
    os << "  shaping: N " << shaping.composition.blocklength() << ", H " << shaping.mapping_h
       << ", Ms " << shaping.symbol_block_length() << ", P_ch "
       << watt_to_dbm(shaping.power_w) << " dBm/pol\n";
    os << "  model: M " << model.memory << ", mode " << to_string(model.mode) << ", quad "
       << model.quad.effective_points() << "^2, psd points " << model.psd_points << "\n";
    os << "  ase budget: " << ase_power_per_pol_w(link, pulse.symbol_rate_hz) * 1e6
       << " uW/pol over the link\n";
    return os.str();
}

int resolve_workers(const SweepSpec& spec) {
    if (const char* env = std::getenv("MEGN_WORKERS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    if (spec.workers > 0) return spec.workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace megn
