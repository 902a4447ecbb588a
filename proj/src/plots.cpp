#include "ksns/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ksns/diagnostics.hpp"

namespace ksns {

namespace {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

constexpr int kW = 760, kH = 480;
constexpr int kL = 70, kR = 150, kT = 40, kB = 50;  // margins (legend on the right)

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Round the raw range out to "nice" tick positions.
std::vector<double> ticks(double lo, double hi) {
    if (!(hi > lo)) return {lo};
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * mag >= raw) { step = m * mag; break; }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 0.5 * step; t += step) out.push_back(t);
    return out;
}

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<Series>& series) {
    double xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0;
    bool any = false;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!any) { xlo = xhi = s.x[i]; ylo = yhi = s.y[i]; any = true; }
            xlo = std::min(xlo, s.x[i]); xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]); yhi = std::max(yhi, s.y[i]);
        }
    if (xhi <= xlo) xhi = xlo + 1.0;
    if (yhi <= ylo) { ylo -= 0.5; yhi += 0.5; }
    const double ypad = 0.05 * (yhi - ylo);
    ylo -= ypad; yhi += ypad;

    auto px = [&](double x) { return kL + (x - xlo) / (xhi - xlo) * (kW - kL - kR); };
    auto py = [&](double y) { return kH - kB - (y - ylo) / (yhi - ylo) * (kH - kT - kB); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("plot: cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
        << "' font-family='sans-serif' font-size='12'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << kW / 2 << "' y='20' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    // axes
    out << "<line x1='" << kL << "' y1='" << kT << "' x2='" << kL << "' y2='" << kH - kB
        << "' stroke='black'/>\n"
        << "<line x1='" << kL << "' y1='" << kH - kB << "' x2='" << kW - kR << "' y2='"
        << kH - kB << "' stroke='black'/>\n";
    for (double t : ticks(xlo, xhi)) {
        const double x = px(t);
        out << "<line x1='" << x << "' y1='" << kH - kB << "' x2='" << x << "' y2='"
            << kH - kB + 5 << "' stroke='black'/>\n"
            << "<text x='" << x << "' y='" << kH - kB + 18 << "' text-anchor='middle'>" << fmt(t)
            << "</text>\n";
    }
    for (double t : ticks(ylo, yhi)) {
        const double y = py(t);
        out << "<line x1='" << kL - 5 << "' y1='" << y << "' x2='" << kL << "' y2='" << y
            << "' stroke='black'/>\n"
            << "<text x='" << kL - 8 << "' y='" << y + 4 << "' text-anchor='end'>" << fmt(t)
            << "</text>\n";
    }
    out << "<text x='" << (kL + kW - kR) / 2 << "' y='" << kH - 12
        << "' text-anchor='middle'>" << xlabel << "</text>\n"
        << "<text x='18' y='" << (kT + kH - kB) / 2
        << "' text-anchor='middle' transform='rotate(-90 18 " << (kT + kH - kB) / 2 << ")'>"
        << ylabel << "</text>\n";

    for (size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color = kColors[si % 8];
        if (!s.x.empty()) {
            out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
            for (size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
            }
            out << "'/>\n";
        }
        const int ly = kT + 16 + 18 * static_cast<int>(si);
        out << "<line x1='" << kW - kR + 10 << "' y1='" << ly - 4 << "' x2='" << kW - kR + 34
            << "' y2='" << ly - 4 << "' stroke='" << color << "' stroke-width='2'/>\n"
            << "<text x='" << kW - kR + 40 << "' y='" << ly << "'>" << s.label << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("plot: write failed: " + path);
}

std::string first_line(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("plot: cannot open " + path);
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string stem_of(const std::string& path) {
    const auto slash = path.find_last_of('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path, size_t ncols) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("plot: cannot open " + path);
    std::string line;
    std::getline(in, line);  // header already inspected
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        if (row.size() != ncols) throw std::runtime_error("plot: malformed row in " + path);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> diagnostics_plots(const std::string& csv, const std::string& out_dir) {
    const auto records = read_csv(csv);
    auto line = [&](const std::string& name, const std::string& title,
                    std::vector<Series> series) {
        const std::string path = out_dir + "/" + stem_of(csv) + "_" + name + ".svg";
        write_line_plot(path, title, "t", name, series);
        return path;
    };
    auto col = [&](double DiagnosticsRecord::* f) {
        Series s;
        for (const auto& r : records) { s.x.push_back(r.t); s.y.push_back(r.*f); }
        return s;
    };
    Series e2 = col(&DiagnosticsRecord::E2); e2.label = "E2";
    Series mix = col(&DiagnosticsRecord::mix_sq); mix.label = "mix_sq";
    Series u = col(&DiagnosticsRecord::u_l2_sq); u.label = "u_l2_sq";
    Series rks = col(&DiagnosticsRecord::res_ks_energy); rks.label = "res_ks_energy";
    Series rns = col(&DiagnosticsRecord::res_ns_energy); rns.label = "res_ns_energy";
    Series rst = col(&DiagnosticsRecord::res_static_identity); rst.label = "res_static";
    Series rla = col(&DiagnosticsRecord::res_hessian_identity); rla.label = "res_hessian_identity";
    return {line("E2", "fluctuation energy", {e2}),
            line("mix_sq", "mixing norm", {mix}),
            line("u_l2_sq", "kinetic energy", {u}),
            line("residuals", "identity residuals", {rks, rns, rst, rla})};
}

std::string heatmap_plot(const std::string& csv, const std::string& out_dir) {
    std::ifstream in(csv, std::ios::binary);
    std::string line;
    std::getline(in, line);
    struct Row { double g, B; std::string outcome; };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string gs, bs, oc;
        std::getline(ls, gs, ',');
        std::getline(ls, bs, ',');
        std::getline(ls, oc, ',');
        rows.push_back({std::strtod(gs.c_str(), nullptr), std::strtod(bs.c_str(), nullptr), oc});
    }
    std::vector<double> gs, bs;
    for (const auto& r : rows) { gs.push_back(r.g); bs.push_back(r.B); }
    auto uniq = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(gs); uniq(bs);

    const std::string path = out_dir + "/" + stem_of(csv) + "_heatmap.svg";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("plot: cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
        << "' font-family='sans-serif' font-size='12'>\n"
        << "<rect width='100%' height='100%' fill='white'/>\n"
        << "<text x='" << kW / 2 << "' y='20' text-anchor='middle' font-size='15'>"
        << "outcome map (g, B)</text>\n";
    const double cw = gs.empty() ? 0.0 : double(kW - kL - kR) / gs.size();
    const double ch = bs.empty() ? 0.0 : double(kH - kT - kB) / bs.size();
    auto color_of = [](const std::string& oc) {
        if (oc == "completed_horizon") return "#2ca02c";
        if (oc == "blowup_detected") return "#d62728";
        if (oc == "resolution_loss") return "#ff7f0e";
        return "#7f7f7f";
    };
    for (const auto& r : rows) {
        const size_t gi = std::lower_bound(gs.begin(), gs.end(), r.g) - gs.begin();
        const size_t bi = std::lower_bound(bs.begin(), bs.end(), r.B) - bs.begin();
        const double x = kL + cw * gi;
        const double y = kH - kB - ch * (bi + 1);  // B increases upward
        out << "<rect class='cell' x='" << x << "' y='" << y << "' width='" << cw << "' height='"
            << ch << "' fill='" << color_of(r.outcome) << "' stroke='white'/>\n";
    }
    for (size_t i = 0; i < gs.size(); ++i)
        out << "<text x='" << kL + cw * (i + 0.5) << "' y='" << kH - kB + 18
            << "' text-anchor='middle'>" << fmt(gs[i]) << "</text>\n";
    for (size_t i = 0; i < bs.size(); ++i)
        out << "<text x='" << kL - 8 << "' y='" << kH - kB - ch * (i + 0.5) + 4
            << "' text-anchor='end'>" << fmt(bs[i]) << "</text>\n";
    out << "<text x='" << (kL + kW - kR) / 2 << "' y='" << kH - 12
        << "' text-anchor='middle'>g</text>\n"
        << "<text x='18' y='" << (kT + kH - kB) / 2
        << "' text-anchor='middle' transform='rotate(-90 18 " << (kT + kH - kB) / 2
        << ")'>B</text>\n";
    const char* legend[][2] = {{"completed_horizon", "#2ca02c"},
                               {"blowup_detected", "#d62728"},
                               {"resolution_loss", "#ff7f0e"}};
    for (int i = 0; i < 3; ++i) {
        const int ly = kT + 16 + 18 * i;
        out << "<rect x='" << kW - kR + 10 << "' y='" << ly - 10
            << "' width='12' height='12' fill='" << legend[i][1] << "'/>\n"
            << "<text x='" << kW - kR + 28 << "' y='" << ly << "'>" << legend[i][0]
            << "</text>\n";
    }
    out << "</svg>\n";
    return path;
}

}  // namespace

std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths,
                                    const std::string& out_dir) {
    std::vector<std::string> written;
    std::vector<std::string> compare_files;
    std::string summary_file;

    for (const auto& path : csv_paths) {
        const std::string header = first_line(path);
        if (header.rfind("t,mass,rho_m,", 0) == 0) {
            for (auto& p : diagnostics_plots(path, out_dir)) written.push_back(std::move(p));
        } else if (header == "t,r_sq,v_sq") {
            compare_files.push_back(path);
        } else if (header == "B,sup_r_sq,sup_v_sq") {
            summary_file = path;
        } else if (header.rfind("g,B,outcome,", 0) == 0) {
            written.push_back(heatmap_plot(path, out_dir));
        } else {
            throw std::runtime_error("plot: unrecognized CSV header in " + path);
        }
    }

    if (!compare_files.empty()) {
        std::vector<Series> series;
        for (const auto& path : compare_files) {
            Series s;
            s.label = stem_of(path);
            for (const auto& row : read_numeric_csv(path, 3)) {
                s.x.push_back(row[0]);
                s.y.push_back(row[1]);
            }
            series.push_back(std::move(s));
        }
        const std::string path = out_dir + "/compare_overlay.svg";
        write_line_plot(path, "full vs static: ||r||^2 over time", "t", "r_sq", series);
        written.push_back(path);
    }
    if (!summary_file.empty()) {
        Series s;
        s.label = "sup_r_sq";
        for (const auto& row : read_numeric_csv(summary_file, 3)) {
            s.x.push_back(row[0]);
            s.y.push_back(row[1]);
        }
        const std::string path = out_dir + "/compare_summary.svg";
        write_line_plot(path, "sup ||r||^2 vs B", "B", "sup_r_sq", {s});
        written.push_back(path);
    }
    return written;
}

}  // namespace ksns
