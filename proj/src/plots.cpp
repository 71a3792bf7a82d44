#include "pucycle/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pucycle {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return {buf};
}

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return {buf};
}

std::ofstream open_out(const std::string& path, const char* what) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(std::string(what) + ": cannot open " + path);
    return out;
}

}  // namespace

void emit_gain_plot(const FilterTrace& trace, const std::string& csv_path,
                    const std::string& svg_path) {
    {
        std::ofstream csv = open_out(csv_path, "emit_gain_plot");
        csv << "step,m,k_obs_x,k_obs_y,k_pred_x,k_pred_y\n";
        for (std::size_t k = 0; k < trace.steps.size(); ++k) {
            const TraceStep& ts = trace.steps[k];
            csv << k << ',' << ts.m << ',';
            if (ts.has_prior) {
                const Vec2 kp{1.0 - ts.k_obs.x, 1.0 - ts.k_obs.y};
                csv << num(ts.k_obs.x) << ',' << num(ts.k_obs.y) << ',' << num(kp.x) << ','
                    << num(kp.y);
            } else {
                csv << ",,,";
            }
            csv << '\n';
        }
    }

    const int n = trace.length();
    const double w = 640.0, h = 240.0, pad = 36.0;
    const double plot_w = w - 2.0 * pad, plot_h = h - 2.0 * pad;
    const double slot = plot_w / std::max(1, n);
    auto sx = [&](double step) { return pad + step * slot; };
    auto sy = [&](double gain) { return pad + (1.0 - gain) * plot_h; };

    std::ofstream svg = open_out(svg_path, "emit_gain_plot");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // masked-step background marks first, so bars draw over them
    for (int k = 0; k < n; ++k) {
        if (trace.steps[static_cast<std::size_t>(k)].m == 0) {
            svg << "<rect x=\"" << fixed(sx(k)) << "\" y=\"" << fixed(pad) << "\" width=\""
                << fixed(slot) << "\" height=\"" << fixed(plot_h)
                << "\" fill=\"#fdd\" class=\"missing\"/>\n";
        }
    }
    svg << "<line x1=\"" << fixed(pad) << "\" y1=\"" << fixed(pad + plot_h) << "\" x2=\""
        << fixed(pad + plot_w) << "\" y2=\"" << fixed(pad + plot_h)
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << fixed(pad) << "\" y1=\"" << fixed(pad) << "\" x2=\"" << fixed(pad)
        << "\" y2=\"" << fixed(pad + plot_h) << "\" stroke=\"black\"/>\n";
    for (int k = 0; k < n; ++k) {
        const TraceStep& ts = trace.steps[static_cast<std::size_t>(k)];
        if (!ts.has_prior) continue;
        const double bw = slot * 0.4;
        svg << "<rect x=\"" << fixed(sx(k) + slot * 0.05) << "\" y=\"" << fixed(sy(ts.k_obs.x))
            << "\" width=\"" << fixed(bw) << "\" height=\"" << fixed(sy(0.0) - sy(ts.k_obs.x))
            << "\" fill=\"#36c\"/>\n";
        svg << "<rect x=\"" << fixed(sx(k) + slot * 0.5) << "\" y=\"" << fixed(sy(ts.k_obs.y))
            << "\" width=\"" << fixed(bw) << "\" height=\"" << fixed(sy(0.0) - sy(ts.k_obs.y))
            << "\" fill=\"#693\"/>\n";
    }
    svg << "<text x=\"" << fixed(pad) << "\" y=\"" << fixed(pad - 10.0)
        << "\" font-size=\"12\">k_obs per step (x: blue, y: green; shaded = missing)</text>\n"
        << "</svg>\n";
    if (!svg) throw std::runtime_error("emit_gain_plot: write failed for " + svg_path);
}

void emit_ellipse_plot(const FilterTrace& trace, const std::vector<Vec2>& gt, double n_sigma,
                       const std::string& csv_path, const std::string& svg_path) {
    if (gt.size() != trace.steps.size()) {
        throw std::invalid_argument("emit_ellipse_plot: trace/gt misalignment");
    }
    if (n_sigma <= 0.0) throw std::invalid_argument("emit_ellipse_plot: n_sigma must be positive");

    struct Ell {
        Vec2 c;
        double a, b, angle;
    };
    std::vector<Ell> ells;

    {
        std::ofstream csv = open_out(csv_path, "emit_ellipse_plot");
        csv << "step,m,prior_x,prior_y,semi_major,semi_minor,angle_rad\n";
        for (std::size_t k = 0; k < trace.steps.size(); ++k) {
            const TraceStep& ts = trace.steps[k];
            csv << k << ',' << ts.m << ',';
            if (ts.has_prior) {
                const PrincipalAxes ax = principal_axes(ts.prior.cov);
                const Ell e{ts.prior.mean, n_sigma * std::sqrt(std::max(0.0, ax.major)),
                            n_sigma * std::sqrt(std::max(0.0, ax.minor)), ax.angle_rad};
                ells.push_back(e);
                csv << num(e.c.x) << ',' << num(e.c.y) << ',' << num(e.a) << ',' << num(e.b)
                    << ',' << num(e.angle);
            } else {
                csv << ",,,,";
            }
            csv << '\n';
        }
    }

    // world bounding box over everything drawn
    double lo_x = gt[0].x, hi_x = gt[0].x, lo_y = gt[0].y, hi_y = gt[0].y;
    auto grow = [&](const Vec2& p, double r) {
        lo_x = std::min(lo_x, p.x - r);
        hi_x = std::max(hi_x, p.x + r);
        lo_y = std::min(lo_y, p.y - r);
        hi_y = std::max(hi_y, p.y + r);
    };
    for (std::size_t k = 0; k < gt.size(); ++k) {
        grow(gt[k], 0.0);
        if (trace.steps[k].m == 1) grow(trace.steps[k].obs, 0.0);
    }
    for (const Ell& e : ells) grow(e.c, std::max(e.a, e.b));
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-6});
    const double view = 600.0, pad = 30.0;
    const double scale = (view - 2.0 * pad) / span;
    auto px = [&](double x) { return pad + (x - lo_x) * scale; };
    auto py = [&](double y) { return view - pad - (y - lo_y) * scale; };  // y up

    std::ofstream svg = open_out(svg_path, "emit_ellipse_plot");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << view << "\" height=\"" << view
        << "\" viewBox=\"0 0 " << view << ' ' << view << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (const Ell& e : ells) {
        const double deg = -e.angle * 180.0 / 3.141592653589793;  // svg y axis points down
        svg << "<ellipse cx=\"" << fixed(px(e.c.x)) << "\" cy=\"" << fixed(py(e.c.y))
            << "\" rx=\"" << fixed(e.a * scale) << "\" ry=\"" << fixed(e.b * scale)
            << "\" transform=\"rotate(" << fixed(deg) << ' ' << fixed(px(e.c.x)) << ' '
            << fixed(py(e.c.y)) << ")\" fill=\"#9cf\" fill-opacity=\"0.25\" stroke=\"#36c\"/>\n";
    }

    svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < gt.size(); ++k) {
        svg << fixed(px(gt[k].x)) << ',' << fixed(py(gt[k].y)) << (k + 1 < gt.size() ? " " : "");
    }
    svg << "\"/>\n";

    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const TraceStep& ts = trace.steps[k];
        if (ts.m == 1) {
            svg << "<circle cx=\"" << fixed(px(ts.obs.x)) << "\" cy=\"" << fixed(py(ts.obs.y))
                << "\" r=\"3\" fill=\"#c33\"/>\n";
        } else {
            const double cx = px(gt[k].x), cy = py(gt[k].y), r = 5.0;
            svg << "<line x1=\"" << fixed(cx - r) << "\" y1=\"" << fixed(cy - r) << "\" x2=\""
                << fixed(cx + r) << "\" y2=\"" << fixed(cy + r)
                << "\" stroke=\"#c33\" stroke-width=\"2\" class=\"missing\"/>\n"
                << "<line x1=\"" << fixed(cx - r) << "\" y1=\"" << fixed(cy + r) << "\" x2=\""
                << fixed(cx + r) << "\" y2=\"" << fixed(cy - r)
                << "\" stroke=\"#c33\" stroke-width=\"2\" class=\"missing\"/>\n";
        }
    }
    svg << "</svg>\n";
    if (!svg) throw std::runtime_error("emit_ellipse_plot: write failed for " + svg_path);
}

}  // namespace pucycle
