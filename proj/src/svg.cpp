#include "fsem/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

namespace fsem {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 60, kRight = 150, kTop = 40, kBottom = 50;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Maps [lo, hi] onto [a, b]; a zero-width range lands in the middle.
double place(double v, double lo, double hi, double a, double b) {
    if (hi <= lo) return 0.5 * (a + b);
    return a + (v - lo) / (hi - lo) * (b - a);
}

}  // namespace

const std::vector<std::string>& scatter_palette() {
    static const std::vector<std::string> palette{
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
        "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39",
        "#7b4173", "#3182bd", "#e6550d", "#31a354", "#756bb1", "#636363",
    };
    return palette;
}

std::string render_scatter_svg(const Matrix& layout, const std::vector<std::size_t>& labels,
                               const std::vector<std::string>& names, const std::string& title) {
    if (layout.cols() != 2) throw std::invalid_argument("visualize: layout must have two columns");
    if (static_cast<std::size_t>(layout.rows()) != labels.size()) {
        throw std::invalid_argument("visualize: layout has " + std::to_string(layout.rows()) + " rows but " +
                                    std::to_string(labels.size()) + " labels");
    }
    const auto& palette = scatter_palette();
    for (std::size_t l : labels) {
        if (l >= palette.size()) {
            throw std::invalid_argument("visualize: label " + std::to_string(l) + " exceeds the " +
                                        std::to_string(palette.size()) + "-colour palette");
        }
    }

    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    if (layout.rows() > 0) {
        x_lo = layout.col(0).minCoeff();
        x_hi = layout.col(0).maxCoeff();
        y_lo = layout.col(1).minCoeff();
        y_hi = layout.col(1).maxCoeff();
    }
    const double px0 = kLeft, px1 = kWidth - kRight, py0 = kHeight - kBottom, py1 = kTop;

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) + "\" height=\"" +
         fmt("%.0f", kHeight) + "\" viewBox=\"0 0 " + fmt("%.0f", kWidth) + " " + fmt("%.0f", kHeight) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    s += "<text x=\"" + fmt("%.1f", kWidth / 2 - kRight / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + escape(title) + "</text>\n";

    // axes
    s += "<g stroke=\"#000000\" stroke-width=\"1\">\n";
    s += "<line x1=\"" + fmt("%.1f", px0) + "\" y1=\"" + fmt("%.1f", py0) + "\" x2=\"" + fmt("%.1f", px1) +
         "\" y2=\"" + fmt("%.1f", py0) + "\"/>\n";
    s += "<line x1=\"" + fmt("%.1f", px0) + "\" y1=\"" + fmt("%.1f", py0) + "\" x2=\"" + fmt("%.1f", px0) +
         "\" y2=\"" + fmt("%.1f", py1) + "\"/>\n";
    s += "</g>\n";
    s += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<text x=\"" + fmt("%.1f", px0) + "\" y=\"" + fmt("%.1f", py0 + 16) + "\" text-anchor=\"start\">" +
         fmt("%.3g", x_lo) + "</text>\n";
    s += "<text x=\"" + fmt("%.1f", px1) + "\" y=\"" + fmt("%.1f", py0 + 16) + "\" text-anchor=\"end\">" +
         fmt("%.3g", x_hi) + "</text>\n";
    s += "<text x=\"" + fmt("%.1f", px0 - 6) + "\" y=\"" + fmt("%.1f", py0) + "\" text-anchor=\"end\">" +
         fmt("%.3g", y_lo) + "</text>\n";
    s += "<text x=\"" + fmt("%.1f", px0 - 6) + "\" y=\"" + fmt("%.1f", py1 + 8) + "\" text-anchor=\"end\">" +
         fmt("%.3g", y_hi) + "</text>\n";
    s += "<text x=\"" + fmt("%.1f", 0.5 * (px0 + px1)) + "\" y=\"" + fmt("%.1f", py0 + 34) +
         "\" text-anchor=\"middle\">dim 1</text>\n";
    s += "<text x=\"16\" y=\"" + fmt("%.1f", 0.5 * (py0 + py1)) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt("%.1f", 0.5 * (py0 + py1)) + ")\">dim 2</text>\n";
    s += "</g>\n";

    s += "<g class=\"points\" stroke=\"none\" fill-opacity=\"0.8\">\n";
    for (Eigen::Index i = 0; i < layout.rows(); ++i) {
        const double x = place(layout(i, 0), x_lo, x_hi, px0 + 6, px1 - 6);
        const double y = place(layout(i, 1), y_lo, y_hi, py0 - 6, py1 + 6);
        s += "<circle cx=\"" + fmt("%.2f", x) + "\" cy=\"" + fmt("%.2f", y) + "\" r=\"3\" fill=\"" +
             palette[labels[static_cast<std::size_t>(i)]] + "\"/>\n";
    }
    s += "</g>\n";

    const std::set<std::size_t> present(labels.begin(), labels.end());
    s += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    double ly = kTop + 10;
    for (std::size_t l : present) {
        const std::string name = l < names.size() ? names[l] : std::to_string(l);
        s += "<rect x=\"" + fmt("%.1f", kWidth - kRight + 20) + "\" y=\"" + fmt("%.1f", ly - 9) +
             "\" width=\"10\" height=\"10\" fill=\"" + palette[l] + "\"/>\n";
        s += "<text x=\"" + fmt("%.1f", kWidth - kRight + 36) + "\" y=\"" + fmt("%.1f", ly) + "\">" + escape(name) +
             "</text>\n";
        ly += 18;
    }
    s += "</g>\n";
    s += "</svg>\n";
    return s;
}

void visualize(const Matrix& layout, const std::vector<std::size_t>& labels, const std::vector<std::string>& names,
               const std::string& title, const std::filesystem::path& path) {
    const std::string svg = render_scatter_svg(layout, labels, names, title);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("visualize: cannot write " + path.string());
    os << svg;
    if (!os) throw std::runtime_error("visualize: failed writing " + path.string());
}

}  // namespace fsem
