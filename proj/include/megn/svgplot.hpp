#pragma once

#include <string>
#include <vector>

namespace megn {

struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
    bool markers = false;
};

struct PlotOptions {
    std::string title, xlabel, ylabel;
    bool logx = false;
    bool logy = false;
};

void plot_lines(const std::string& path, const PlotOptions& opt,
                const std::vector<PlotSeries>& series);

// Heatmap of z[i*ncols + j] over (x[j], y[i]); values are normalized to a
// maximum of 1 before coloring.
void plot_heatmap(const std::string& path, const PlotOptions& opt, const std::vector<double>& x,
                  const std::vector<double>& y, const std::vector<double>& z);

// Reads a CSV produced by this artifact, infers its kind from the columns
// (PSD, kernel lattice, covariances, sweep table) and writes the matching SVG
// plots. Returns the files written.
std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& outdir);

}  // namespace megn
