#include "csm/correspondence.hpp"

#include <fstream>
#include <sstream>

#include "csm/error.hpp"

namespace csm {

DenseCorrespondence::DenseCorrespondence(std::vector<Point2> input_points,
                                         std::vector<Point2> canonical_points,
                                         std::vector<std::uint8_t> visible)
    : input_points_(std::move(input_points)),
      canonical_points_(std::move(canonical_points)),
      visible_(std::move(visible)) {
    if (input_points_.size() != canonical_points_.size())
        throw ValidationError("correspondence length mismatch: " +
                              std::to_string(input_points_.size()) + " input vs " +
                              std::to_string(canonical_points_.size()) + " canonical points");
    if (input_points_.empty()) throw ValidationError("correspondence must have N >= 1 vertices");
    if (visible_.empty()) {
        visible_.assign(input_points_.size(), 1);
    } else if (visible_.size() != input_points_.size()) {
        throw ValidationError("visibility flag count does not match vertex count");
    }
    for (std::size_t n = 0; n < input_points_.size(); ++n) {
        if (!visible_[n]) continue;
        if (round_pixel(input_points_[n].x) < 0 || round_pixel(input_points_[n].y) < 0 ||
            round_pixel(canonical_points_[n].x) < 0 || round_pixel(canonical_points_[n].y) < 0)
            throw ValidationError("vertex " + std::to_string(n) +
                                  " rounds to a negative coordinate");
    }
}

std::size_t DenseCorrespondence::visible_count() const {
    std::size_t k = 0;
    for (auto v : visible_) k += (v != 0);
    return k;
}

namespace {

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

DenseCorrespondence load_correspondence(const std::filesystem::path& path, int stride) {
    if (stride < 1) throw InputError("stride must be >= 1, got " + std::to_string(stride));
    std::ifstream in(path);
    if (!in) throw InputError("correspondence not found: " + path.string());

    std::string line;
    std::size_t line_no = 0;
    long long declared = -1;

    // Header: vertex count.
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = strip_comment(line);
        if (blank(body)) continue;
        std::istringstream ss(body);
        if (!(ss >> declared) || declared < 1)
            throw ParseError("expected positive vertex count in header", line_no);
        std::string extra;
        if (ss >> extra) throw ParseError("unexpected token after vertex count", line_no);
        break;
    }
    if (declared < 0) throw ParseError("missing header line with vertex count");

    std::vector<Point2> input_pts, canon_pts;
    std::vector<std::uint8_t> vis;
    long long row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = strip_comment(line);
        if (blank(body)) continue;
        std::istringstream ss(body);
        float xi, yi, xf, yf;
        if (!(ss >> xi >> yi >> xf >> yf))
            throw ParseError("expected 'x_I y_I x_F y_F [v]'", line_no);
        int v = 1;
        std::string tail;
        if (ss >> tail) {
            if (tail == "0")
                v = 0;
            else if (tail == "1")
                v = 1;
            else
                throw ParseError("visibility flag must be 0 or 1, got '" + tail + "'", line_no);
            std::string extra;
            if (ss >> extra) throw ParseError("unexpected trailing token '" + extra + "'", line_no);
        }
        if (row % stride == 0) {
            input_pts.push_back({xi, yi});
            canon_pts.push_back({xf, yf});
            vis.push_back(static_cast<std::uint8_t>(v));
        }
        ++row;
    }
    if (row != declared)
        throw ValidationError("header declares " + std::to_string(declared) + " vertices but " +
                              std::to_string(row) + " rows found in " + path.string());

    return DenseCorrespondence(std::move(input_pts), std::move(canon_pts), std::move(vis));
}

void save_correspondence(const DenseCorrespondence& corr, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open for writing: " + path.string());
    out << corr.size() << "\n";
    for (std::size_t n = 0; n < corr.size(); ++n) {
        const auto& a = corr.input_point(n);
        const auto& b = corr.canonical_point(n);
        out << a.x << " " << a.y << " " << b.x << " " << b.y << " " << (corr.visible(n) ? 1 : 0)
            << "\n";
    }
    if (!out) throw InputError("write failed: " + path.string());
}

void check_bounds(const DenseCorrespondence& corr, int input_width, int input_height,
                  int canonical_width, int canonical_height) {
    for (std::size_t n = 0; n < corr.size(); ++n) {
        if (!corr.visible(n)) continue;
        const int xi = round_pixel(corr.input_point(n).x);
        const int yi = round_pixel(corr.input_point(n).y);
        const int xf = round_pixel(corr.canonical_point(n).x);
        const int yf = round_pixel(corr.canonical_point(n).y);
        if (xi < 0 || xi >= input_width || yi < 0 || yi >= input_height)
            throw ValidationError("vertex " + std::to_string(n) + " (" + std::to_string(xi) +
                                  "," + std::to_string(yi) + ") outside input image " +
                                  std::to_string(input_width) + "x" + std::to_string(input_height));
        if (xf < 0 || xf >= canonical_width || yf < 0 || yf >= canonical_height)
            throw ValidationError("vertex " + std::to_string(n) + " (" + std::to_string(xf) +
                                  "," + std::to_string(yf) + ") outside canonical image " +
                                  std::to_string(canonical_width) + "x" +
                                  std::to_string(canonical_height));
    }
}

}  // namespace csm
