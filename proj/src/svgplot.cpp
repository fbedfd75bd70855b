#include "megn/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "megn/csv.hpp"

namespace megn {

namespace {

constexpr int width = 720, height = 480;
constexpr int ml = 80, mr = 30, mt = 40, mb = 60;  // margins

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct AxisScale {
    double lo, hi;
    bool log;
    double to01(double v) const {
        double a = log ? std::log10(v) : v;
        double l = log ? std::log10(lo) : lo;
        double h = log ? std::log10(hi) : hi;
        return h > l ? (a - l) / (h - l) : 0.5;
    }
};

AxisScale fit_axis(std::vector<double> values, bool log) {
    if (log) {
        values.erase(std::remove_if(values.begin(), values.end(),
                                    [](double v) { return !(v > 0.0); }),
                     values.end());
    }
    if (values.empty()) return {0.0, 1.0, log};
    double lo = *std::min_element(values.begin(), values.end());
    double hi = *std::max_element(values.begin(), values.end());
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    } else if (!log) {
        double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    return {lo, hi, log};
}

std::string fmt_tick(double v) {
    char buf[32];
    double av = std::abs(v);
    if (av != 0.0 && (av >= 1e4 || av < 1e-2))
        std::snprintf(buf, sizeof buf, "%.2g", v);
    else
        std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string color_of(double t) {  // 0..1, dark blue -> yellow
    t = std::clamp(t, 0.0, 1.0);
    auto lerp = [](double a, double b, double u) { return a + (b - a) * u; };
    double r, g, b;
    if (t < 0.5) {
        double u = t / 0.5;
        r = lerp(13, 33, u);
        g = lerp(8, 145, u);
        b = lerp(135, 140, u);
    } else {
        double u = (t - 0.5) / 0.5;
        r = lerp(33, 253, u);
        g = lerp(145, 231, u);
        b = lerp(140, 37, u);
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(r), static_cast<int>(g),
                  static_cast<int>(b));
    return buf;
}

class Svg {
public:
    explicit Svg(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path);
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
             << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
             << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }
    ~Svg() { out_ << "</svg>\n"; }
    std::ofstream& raw() { return out_; }

    void text(double x, double y, const std::string& s, int size = 13,
              const std::string& anchor = "middle", const std::string& extra = "") {
        out_ << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"" << size
             << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\" " << extra << ">"
             << s << "</text>\n";
    }
    void line(double x1, double y1, double x2, double y2, const std::string& stroke = "#444",
              double w = 1.0) {
        out_ << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
             << "\" stroke=\"" << stroke << "\" stroke-width=\"" << w << "\"/>\n";
    }

    void frame(const PlotOptions& opt, const AxisScale& xs, const AxisScale& ys) {
        line(ml, height - mb, width - mr, height - mb);
        line(ml, mt, ml, height - mb);
        text(width / 2.0, 22, opt.title, 15);
        text(width / 2.0, height - 14, opt.xlabel);
        out_ << "<text x=\"18\" y=\"" << height / 2.0
             << "\" font-size=\"13\" font-family=\"sans-serif\" text-anchor=\"middle\" "
                "transform=\"rotate(-90 18 "
             << height / 2.0 << ")\">" << opt.ylabel << "</text>\n";
        for (int k = 0; k <= 5; ++k) {
            double t = k / 5.0;
            double px = ml + t * (width - ml - mr);
            double py = height - mb - t * (height - mt - mb);
            double xv = xs.log ? std::pow(10.0, std::log10(xs.lo) +
                                                    t * (std::log10(xs.hi) - std::log10(xs.lo)))
                               : xs.lo + t * (xs.hi - xs.lo);
            double yv = ys.log ? std::pow(10.0, std::log10(ys.lo) +
                                                    t * (std::log10(ys.hi) - std::log10(ys.lo)))
                               : ys.lo + t * (ys.hi - ys.lo);
            line(px, height - mb, px, height - mb + 4);
            text(px, height - mb + 18, fmt_tick(xv), 11);
            line(ml - 4, py, ml, py);
            text(ml - 8, py + 4, fmt_tick(yv), 11, "end");
        }
    }

    double px(const AxisScale& xs, double v) const { return ml + xs.to01(v) * (width - ml - mr); }
    double py(const AxisScale& ys, double v) const {
        return height - mb - ys.to01(v) * (height - mt - mb);
    }

private:
    std::ofstream out_;
};

}  // namespace

void plot_lines(const std::string& path, const PlotOptions& opt,
                const std::vector<PlotSeries>& series) {
    std::vector<double> xs_all, ys_all;
    for (const PlotSeries& s : series) {
        xs_all.insert(xs_all.end(), s.x.begin(), s.x.end());
        ys_all.insert(ys_all.end(), s.y.begin(), s.y.end());
    }
    AxisScale xs = fit_axis(xs_all, opt.logx);
    AxisScale ys = fit_axis(ys_all, opt.logy);

    Svg svg(path);
    svg.frame(opt, xs, ys);
    int ci = 0;
    for (const PlotSeries& s : series) {
        const std::string color = palette[ci % 8];
        if (!s.markers && s.x.size() > 1) {
            std::ostringstream pts;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (opt.logx && !(s.x[i] > 0)) continue;
                if (opt.logy && !(s.y[i] > 0)) continue;
                pts << svg.px(xs, s.x[i]) << "," << svg.py(ys, s.y[i]) << " ";
            }
            svg.raw() << "<polyline fill=\"none\" stroke=\"" << color
                      << "\" stroke-width=\"1.8\" points=\"" << pts.str() << "\"/>\n";
        } else {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (opt.logy && !(s.y[i] > 0)) continue;
                svg.raw() << "<circle cx=\"" << svg.px(xs, s.x[i]) << "\" cy=\""
                          << svg.py(ys, s.y[i]) << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
            }
        }
        svg.text(width - mr - 10, mt + 16 * (ci + 1), s.name, 12, "end",
                 "fill=\"" + color + "\"");
        ++ci;
    }
}

void plot_heatmap(const std::string& path, const PlotOptions& opt, const std::vector<double>& x,
                  const std::vector<double>& y, const std::vector<double>& z) {
    if (x.empty() || y.empty() || z.size() != x.size() * y.size())
        throw std::invalid_argument("heatmap dimensions do not match");
    double zmax = 0.0;
    for (double v : z) zmax = std::max(zmax, std::abs(v));
    if (zmax == 0.0) zmax = 1.0;

    AxisScale xs = fit_axis(x, false), ys = fit_axis(y, false);
    Svg svg(path);
    svg.frame(opt, xs, ys);
    const double cw = (width - ml - mr) / static_cast<double>(x.size());
    const double ch = (height - mt - mb) / static_cast<double>(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) {
            double v = std::abs(z[i * x.size() + j]) / zmax;  // normalized to max 1
            svg.raw() << "<rect x=\"" << ml + j * cw << "\" y=\""
                      << height - mb - (i + 1) * ch << "\" width=\"" << cw + 0.5
                      << "\" height=\"" << ch + 0.5 << "\" fill=\"" << color_of(v) << "\"/>\n";
        }
    svg.text(width - mr - 10, mt - 8, "normalized, max = 1.0", 11, "end");
}

namespace {

std::string stem_of(const std::string& csv_path) {
    return std::filesystem::path(csv_path).stem().string();
}

std::vector<std::string> plot_psd(const CsvTable& t, const std::string& out_base) {
    PlotOptions opt;
    opt.title = "NLI PSD by contribution";
    opt.xlabel = "f [GHz]";
    opt.ylabel = "G(f) [W/Hz]";
    std::vector<PlotSeries> series;
    int fc = t.require_column("f_hz");
    for (const char* col : {"g_egn", "g_spt1", "g_spt2", "g_xpt1", "g_xpt2", "g_xp", "g_total"}) {
        int c = t.column(col);
        if (c < 0) continue;
        PlotSeries s;
        s.name = col;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            s.x.push_back(t.num(r, fc) * 1e-9);
            s.y.push_back(t.num(r, c));
        }
        series.push_back(std::move(s));
    }
    std::string f = out_base + ".svg";
    plot_lines(f, opt, series);
    return {f};
}

std::vector<std::string> plot_kernels(const CsvTable& t, const std::string& out_base) {
    // one heatmap per kernel id over (tau, f); single-f tables degrade to
    // value-vs-tau lines
    int idc = t.require_column("kernel_id");
    int tauc = t.require_column("tau");
    int fc = t.require_column("f_hz");
    int vc = t.require_column("value");
    std::map<std::string, std::vector<std::size_t>> by_id;
    for (std::size_t r = 0; r < t.rows.size(); ++r) by_id[t.rows[r][idc]].push_back(r);

    std::vector<std::string> files;
    std::vector<PlotSeries> tau_series;
    for (auto& [id, rows] : by_id) {
        std::set<double> fset, tauset;
        for (auto r : rows) {
            if (t.rows[r][tauc].empty()) continue;
            fset.insert(t.num(r, fc));
            tauset.insert(t.num(r, tauc));
        }
        if (tauset.empty()) continue;
        if (fset.size() >= 2 && tauset.size() >= 2) {
            std::vector<double> xs(fset.begin(), fset.end());
            std::vector<double> ys(tauset.begin(), tauset.end());
            std::vector<double> z(xs.size() * ys.size(), 0.0);
            for (auto r : rows) {
                if (t.rows[r][tauc].empty()) continue;
                auto xi = std::distance(xs.begin(),
                                        std::find(xs.begin(), xs.end(), t.num(r, fc)));
                auto yi = std::distance(ys.begin(),
                                        std::find(ys.begin(), ys.end(), t.num(r, tauc)));
                z[yi * xs.size() + xi] = t.num(r, vc);
            }
            PlotOptions opt;
            opt.title = id + " over (f, tau)";
            opt.xlabel = "f [Hz]";
            opt.ylabel = "tau [symbols]";
            std::string f = out_base + "_" + id + ".svg";
            plot_heatmap(f, opt, xs, ys, z);
            files.push_back(f);
        } else {
            PlotSeries s;
            s.name = id;
            std::map<double, double> by_tau;
            for (auto r : rows)
                if (!t.rows[r][tauc].empty()) by_tau[t.num(r, tauc)] = t.num(r, vc);
            for (auto& [tau, v] : by_tau) {
                s.x.push_back(tau);
                s.y.push_back(v);
            }
            if (!s.x.empty()) tau_series.push_back(std::move(s));
        }
    }
    if (!tau_series.empty()) {
        PlotOptions opt;
        opt.title = "kernels vs delay";
        opt.xlabel = "tau [symbols]";
        opt.ylabel = "value";
        std::string f = out_base + "_vs_tau.svg";
        plot_lines(f, opt, tau_series);
        files.push_back(f);
    }
    return files;
}

std::vector<std::string> plot_covariances(const CsvTable& t, const std::string& out_base) {
    int kc = t.require_column("kind");
    int tauc = t.require_column("tau");
    int tpc = t.require_column("tau_prime");
    int vc = t.require_column("value");

    std::vector<std::string> files;
    std::vector<PlotSeries> pair_series;
    for (const char* kind : {"S1", "S2", "X1", "X2"}) {
        PlotSeries s;
        s.name = kind;
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            if (t.rows[r][kc] == kind && t.rows[r][tpc].empty()) {
                s.x.push_back(t.num(r, tauc));
                s.y.push_back(t.num(r, vc));
            }
        if (!s.x.empty()) pair_series.push_back(std::move(s));
    }
    if (!pair_series.empty()) {
        PlotOptions opt;
        opt.title = "pair energy covariances";
        opt.xlabel = "tau [symbols]";
        opt.ylabel = "covariance";
        std::string f = out_base + "_pairs.svg";
        plot_lines(f, opt, pair_series);
        files.push_back(f);
    }
    for (const char* kind : {"S3", "X3"}) {
        std::set<double> taus, tps;
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            if (t.rows[r][kc] == kind && !t.rows[r][tpc].empty() && t.num(r, tauc) > 0) {
                taus.insert(t.num(r, tauc));
                tps.insert(t.num(r, tpc));
            }
        if (taus.size() < 2 || tps.size() < 2) continue;
        std::vector<double> xs(taus.begin(), taus.end());
        std::vector<double> ys(tps.begin(), tps.end());
        std::vector<double> z(xs.size() * ys.size(), 0.0);
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            if (t.rows[r][kc] == kind && !t.rows[r][tpc].empty() && t.num(r, tauc) > 0) {
                auto xi =
                    std::distance(xs.begin(), std::find(xs.begin(), xs.end(), t.num(r, tauc)));
                auto yi = std::distance(ys.begin(), std::find(ys.begin(), ys.end(), t.num(r, tpc)));
                z[yi * xs.size() + xi] = t.num(r, vc);
            }
        PlotOptions opt;
        opt.title = std::string(kind) + " triple covariance";
        opt.xlabel = "tau";
        opt.ylabel = "tau'";
        std::string f = out_base + "_" + kind + ".svg";
        plot_heatmap(f, opt, xs, ys, z);
        files.push_back(f);
    }
    return files;
}

std::vector<std::string> plot_eta(const CsvTable& t, const std::string& out_base) {
    // pick the axis with the most distinct values among the sweep columns
    const char* axes[] = {"spans", "blocklength", "rs_gbd", "memory"};
    std::string axis = "blocklength";
    std::size_t best = 0;
    for (const char* a : axes) {
        int c = t.column(a);
        if (c < 0) continue;
        std::set<std::string> vals;
        for (auto& r : t.rows) vals.insert(r[c]);
        if (vals.size() > best) {
            best = vals.size();
            axis = a;
        }
    }
    int ac = t.require_column(axis);
    int hc = t.require_column("mapping");
    int megnc = t.require_column("eta_megn");
    int egnc = t.require_column("eta_egn");
    int simc = t.column("eta_sim");

    std::set<std::string> mappings;
    for (auto& r : t.rows) mappings.insert(r[hc]);

    std::vector<PlotSeries> series;
    for (const std::string& h : mappings) {
        PlotSeries sm;
        sm.name = "megn H=" + h;
        PlotSeries ss;
        ss.name = "sim H=" + h;
        ss.markers = true;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            if (t.rows[r][hc] != h || t.rows[r][megnc].empty()) continue;
            sm.x.push_back(t.num(r, ac));
            sm.y.push_back(t.num(r, megnc));
            if (simc >= 0 && !t.rows[r][simc].empty()) {
                ss.x.push_back(t.num(r, ac));
                ss.y.push_back(t.num(r, simc));
            }
        }
        if (!sm.x.empty()) series.push_back(std::move(sm));
        if (!ss.x.empty()) series.push_back(std::move(ss));
    }
    PlotSeries se;
    se.name = "egn";
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        if (!t.rows[r][egnc].empty()) {
            se.x.push_back(t.num(r, ac));
            se.y.push_back(t.num(r, egnc));
        }
    if (!se.x.empty()) series.push_back(std::move(se));

    PlotOptions opt;
    opt.title = "NLI power coefficient";
    opt.xlabel = axis;
    opt.ylabel = "eta [1/W^2]";
    opt.logx = axis == "blocklength";
    std::string f = out_base + "_eta.svg";
    plot_lines(f, opt, series);
    return {f};
}

}  // namespace

std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& outdir) {
    std::filesystem::create_directories(outdir);
    CsvTable t = read_csv(csv_path);
    const std::string base = outdir + "/" + stem_of(csv_path);
    if (t.column("g_total") >= 0) return plot_psd(t, base);
    if (t.column("kernel_id") >= 0) return plot_kernels(t, base);
    if (t.column("kind") >= 0) return plot_covariances(t, base);
    if (t.column("eta_megn") >= 0) return plot_eta(t, base);
    throw std::runtime_error("csv schema not recognized: expected one of the g_total, kernel_id, "
                             "kind or eta_megn column families in " + csv_path);
}

}  // namespace megn
