#pragma once

#include <array>
#include <cstdio>
#include <string>
#include <vector>

namespace animfa::svg {

// Fixed 800x800 viewport mapping the unit square with 5% margins,
// prevalence y on the horizontal axis, link density z on the vertical.
class Canvas {
public:
    Canvas() {
        body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
                 "viewBox=\"0 0 800 800\">\n";
        body_ += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";
        body_ += "<rect x=\"40\" y=\"40\" width=\"720\" height=\"720\" fill=\"none\" "
                 "stroke=\"#444444\" stroke-width=\"1\"/>\n";
        text(398.0, 786.0, "y");
        text(14.0, 402.0, "z");
    }

    void polyline(const std::vector<std::array<double, 2>>& pts, const char* color,
                  double width, const char* dash = nullptr) {
        if (pts.size() < 2) return;
        body_ += "<polyline fill=\"none\" stroke=\"";
        body_ += color;
        body_ += "\" stroke-width=\"" + fmt(width) + "\"";
        if (dash) {
            body_ += " stroke-dasharray=\"";
            body_ += dash;
            body_ += "\"";
        }
        body_ += " points=\"";
        for (const auto& p : pts) {
            body_ += fmt(px(p[0])) + "," + fmt(py(p[1])) + " ";
        }
        body_ += "\"/>\n";
    }

    void marker_stable(double y, double z) { circle(y, z, 7.0, "black", "black"); }
    void marker_unstable(double y, double z) { circle(y, z, 7.0, "white", "red"); }
    void marker_special(double y, double z, const char* color) { circle(y, z, 6.0, color, color); }

    void marker_start(double y, double z) {
        const double cx = px(y), cy = py(z), r = 8.0;
        line(cx - r, cy, cx + r, cy);
        line(cx, cy - r, cx, cy + r);
        line(cx - 0.7 * r, cy - 0.7 * r, cx + 0.7 * r, cy + 0.7 * r);
        line(cx - 0.7 * r, cy + 0.7 * r, cx + 0.7 * r, cy - 0.7 * r);
    }

    std::string finish() const { return body_ + "</svg>\n"; }

private:
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return buf;
    }

    static double px(double y) { return 40.0 + y * 720.0; }
    static double py(double z) { return 800.0 - (40.0 + z * 720.0); }

    void circle(double y, double z, double r, const char* fill, const char* stroke) {
        body_ += "<circle cx=\"" + fmt(px(y)) + "\" cy=\"" + fmt(py(z)) + "\" r=\"" + fmt(r) +
                 "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"2\"/>\n";
    }

    void line(double x1, double y1, double x2, double y2) {
        body_ += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) +
                 "\" y2=\"" + fmt(y2) + "\" stroke=\"#333333\" stroke-width=\"2\"/>\n";
    }

    void text(double x, double y, const char* s) {
        body_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
                 "\" font-family=\"sans-serif\" font-size=\"16\">";
        body_ += s;
        body_ += "</text>\n";
    }

    std::string body_;
};

}  // namespace animfa::svg
