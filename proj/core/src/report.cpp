#include "sidefd/study.hpp"

#include "sidefd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace sidefd {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("emit: cannot open " + path);
    os << content;
    if (!os) throw IoError("emit: write failed for " + path);
}

struct Series {
    std::string label;
    std::string color;
    bool dashed = false;
    std::vector<double> x; // log2 h
    std::vector<double> y; // log2 rms
};

std::string render_svg(const ErrorReport& report) {
    std::vector<Series> series;
    auto color_for = [](SchemeKind s) {
        return s == SchemeKind::Explicit ? std::string("#1f6fb4") : std::string("#c23b22");
    };
    for (SchemeKind scheme : {SchemeKind::Explicit, SchemeKind::Imex}) {
        Series sup{std::string(scheme_name(scheme)) + " sup", color_for(scheme), false, {}, {}};
        Series l2{std::string(scheme_name(scheme)) + " l2", color_for(scheme), true, {}, {}};
        for (const ErrorRow& row : report.rows) {
            if (row.scheme != scheme) continue;
            if (row.mean_sq_sup <= 0.0 || row.mean_sq_l2 <= 0.0) continue;
            sup.x.push_back(std::log2(row.h));
            sup.y.push_back(std::log2(row.rms_sup()));
            l2.x.push_back(std::log2(row.h));
            l2.y.push_back(std::log2(row.rms_l2()));
        }
        if (!sup.x.empty()) {
            series.push_back(sup);
            series.push_back(l2);
        }
    }

    const double width = 820.0, height = 540.0;
    const double ml = 70.0, mr = 170.0, mt = 30.0, mb = 55.0;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    if (series.empty()) {
        svg << "<text x=\"40\" y=\"60\" font-family=\"sans-serif\">no data</text>\n</svg>\n";
        return svg.str();
    }

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    ymin -= 0.5;
    ymax += 0.5;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

    // Axes and integer ticks.
    svg << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(ymin) << "\" x2=\"" << px(xmax)
        << "\" y2=\"" << py(ymin) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(ymin) << "\" x2=\"" << px(xmin)
        << "\" y2=\"" << py(ymax) << "\" stroke=\"black\"/>\n";
    for (int t = static_cast<int>(std::ceil(xmin)); t <= static_cast<int>(std::floor(xmax)); ++t) {
        svg << "<line x1=\"" << px(t) << "\" y1=\"" << py(ymin) << "\" x2=\"" << px(t)
            << "\" y2=\"" << py(ymax) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << px(t) << "\" y=\"" << height - mb + 20
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << t
            << "</text>\n";
    }
    for (int t = static_cast<int>(std::ceil(ymin)); t <= static_cast<int>(std::floor(ymax)); ++t) {
        svg << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(t) << "\" x2=\"" << px(xmax)
            << "\" y2=\"" << py(t) << "\" stroke=\"#eeeeee\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(t) + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" << t
            << "</text>\n";
    }
    svg << "<text x=\"" << (ml + (width - mr)) / 2 << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
        << "log2 h</text>\n";
    svg << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
        << "transform=\"rotate(-90 18 " << (mt + height - mb) / 2 << ")\">log2 RMS error</text>\n";

    // Slope-1 reference line anchored at the first series' first point.
    {
        const double x0 = series[0].x.front();
        const double y0 = series[0].y.front();
        const double yl = y0 + (xmin - x0) - 0.3;
        const double yr = y0 + (xmax - x0) - 0.3;
        svg << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(yl) << "\" x2=\"" << px(xmax)
            << "\" y2=\"" << py(yr)
            << "\" stroke=\"#777777\" stroke-dasharray=\"2 3\"/>\n";
        svg << "<text x=\"" << px(xmax) - 4 << "\" y=\"" << py(yr) - 6
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" "
            << "fill=\"#777777\">slope 1</text>\n";
    }

    double legend_y = mt + 10;
    for (const auto& s : series) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\""
            << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            svg << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        svg << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            svg << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
                << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
        }
        svg << "<line x1=\"" << width - mr + 12 << "\" y1=\"" << legend_y << "\" x2=\""
            << width - mr + 44 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color << "\""
            << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " stroke-width=\"1.8\"/>\n";
        svg << "<text x=\"" << width - mr + 50 << "\" y=\"" << legend_y + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        legend_y += 20;
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace

void emit(const ErrorReport& report, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("emit: cannot create directory " + dir);

    std::ostringstream errors;
    errors << "scheme,h,tau,M,mean_sq_sup,se_sup,mean_sq_l2,se_l2,"
              "active_small_cells,failed_replications\n";
    for (const ErrorRow& row : report.rows) {
        errors << scheme_name(row.scheme) << ',' << fmt(row.h) << ',' << fmt(row.tau) << ','
               << row.replications << ',' << fmt(row.mean_sq_sup) << ',' << fmt(row.se_sup)
               << ',' << fmt(row.mean_sq_l2) << ',' << fmt(row.se_l2) << ','
               << row.active_small_cells << ',' << row.failed_replications << '\n';
    }
    write_file(dir + "/errors.csv", errors.str());

    std::ostringstream slopes;
    slopes << "scheme,metric,slope,stderr,ci_lo,ci_hi,points\n";
    for (const SlopeRow& s : report.slopes) {
        slopes << scheme_name(s.scheme) << ',' << s.metric << ',' << fmt(s.fit.slope) << ','
               << fmt(s.fit.stderr_slope) << ',' << fmt(s.fit.slope - s.fit.ci_half_width)
               << ',' << fmt(s.fit.slope + s.fit.ci_half_width) << ',' << s.fit.points
               << '\n';
    }
    write_file(dir + "/slopes.csv", slopes.str());

    write_file(dir + "/roc.svg", render_svg(report));
}

} // namespace sidefd
