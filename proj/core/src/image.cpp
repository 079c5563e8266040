#include "digitop/image.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace digitop {

int AdjacencyKind::name() const {
  if (dim == 1 && k == 1) return 2;
  if (dim == 2 && k == 1) return 4;
  if (dim == 2 && k == 2) return 8;
  if (dim == 3 && k == 1) return 6;
  if (dim == 3 && k == 2) return 18;
  if (dim == 3 && k == 3) return 26;
  return -1;
}

AdjacencyKind AdjacencyKind::from_name(int name) {
  switch (name) {
    case 2: return {1, 1};
    case 4: return {2, 1};
    case 8: return {2, 2};
    case 6: return {3, 1};
    case 18: return {3, 2};
    case 26: return {3, 3};
    default:
      throw input_error("unknown adjacency name " + std::to_string(name) +
                        " (expected 2, 4, 8, 6, 18 or 26)");
  }
}

AdjacencyKind AdjacencyKind::from_dim_k(int dim, int k) {
  if (dim < 1) throw input_error("dimension must be at least 1");
  if (k < 1 || k > dim)
    throw input_error("adjacency k must satisfy 1 <= k <= dim, got k=" +
                      std::to_string(k) + " with dim=" + std::to_string(dim));
  return {dim, k};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    default: return "unknown";
  }
}

bool adjacent(const Point& p, const Point& q, const AdjacencyKind& kind) {
  if (static_cast<int>(p.size()) != kind.dim ||
      static_cast<int>(q.size()) != kind.dim)
    throw input_error("adjacent: point dimension does not match adjacency kind");
  int diff = 0;
  for (int i = 0; i < kind.dim; ++i) {
    int d = std::abs(p[i] - q[i]);
    if (d > 1) return false;
    diff += d;
    // diff counts differing coordinates because each step is exactly 1
    if (d == 1 && diff > kind.k) return false;
  }
  if (diff == 0) throw input_error("adjacent: adjacency is defined for distinct points");
  return true;
}

bool adjacent_or_equal(const Point& p, const Point& q, const AdjacencyKind& kind) {
  if (p == q) return true;
  return adjacent(p, q, kind);
}

bool product_adjacent(const Point& a1, const Point& a2, const Point& b1,
                      const Point& b2, const AdjacencyKind& k1,
                      const AdjacencyKind& k2) {
  return adjacent_or_equal(a1, b1, k1) && adjacent_or_equal(a2, b2, k2);
}

DigitalImage::DigitalImage(std::vector<Point> points, AdjacencyKind kind)
    : kind_(AdjacencyKind::from_dim_k(kind.dim, kind.k)), points_(std::move(points)) {
  if (points_.empty()) throw input_error("image must contain at least one point");
  for (const Point& p : points_)
    if (static_cast<int>(p.size()) != kind_.dim)
      throw input_error("image point dimension does not match adjacency kind");
  std::sort(points_.begin(), points_.end());
  auto dup = std::adjacent_find(points_.begin(), points_.end());
  if (dup != points_.end()) {
    std::ostringstream os;
    os << "duplicate point (";
    for (size_t i = 0; i < dup->size(); ++i) os << (i ? " " : "") << (*dup)[i];
    os << ")";
    throw input_error(os.str());
  }
  int n = size();
  nbr_.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (adjacent(points_[i], points_[j], kind_)) {
        nbr_[i].push_back(j);
        nbr_[j].push_back(i);
      }
  for (auto& v : nbr_) std::sort(v.begin(), v.end());
}

int DigitalImage::index_of(const Point& p) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), p);
  if (it == points_.end() || *it != p) return -1;
  return static_cast<int>(it - points_.begin());
}

bool DigitalImage::adjacent_indices(int i, int j) const {
  if (i == j) return false;
  const auto& v = nbr_[i];
  return std::binary_search(v.begin(), v.end(), j);
}

DigitalImage DigitalImage::translated_to_origin() const {
  Point mins = points_[0];
  for (const Point& p : points_)
    for (int c = 0; c < kind_.dim; ++c) mins[c] = std::min(mins[c], p[c]);
  std::vector<Point> pts = points_;
  for (Point& p : pts)
    for (int c = 0; c < kind_.dim; ++c) p[c] -= mins[c];
  return DigitalImage(std::move(pts), kind_);
}

DigitalImage DigitalImage::translated_lexmin_to_origin() const {
  const Point& base = points_[0];  // lexicographically least by canonical order
  std::vector<Point> pts = points_;
  for (Point& p : pts)
    for (int c = 0; c < kind_.dim; ++c) p[c] -= base[c];
  return DigitalImage(std::move(pts), kind_);
}

DigitalImage DigitalImage::subimage(const std::vector<int>& indices) const {
  std::vector<Point> pts;
  pts.reserve(indices.size());
  for (int i : indices) pts.push_back(points_[i]);
  return DigitalImage(std::move(pts), kind_);
}

bool is_connected(const DigitalImage& X) { return component_count(X) == 1; }

int component_count(const DigitalImage& X) {
  int n = X.size();
  std::vector<int> comp(n, -1);
  int count = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : X.neighbors()[u])
        if (comp[v] < 0) {
          comp[v] = count;
          stack.push_back(v);
        }
    }
    ++count;
  }
  return count;
}

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

[[noreturn]] void fail(int lineno, const std::string& what) {
  throw parse_error("line " + std::to_string(lineno) + ": " + what);
}

}  // namespace

DigitalImage parse_image(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  int dim = -1, k = -1;
  std::vector<Point> pts;
  while (std::getline(in, raw)) {
    ++lineno;
    std::istringstream ls(strip_comment(raw));
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "dim") {
      if (dim >= 0) fail(lineno, "duplicate dim line");
      if (!pts.empty()) fail(lineno, "dim must precede points");
      if (!(ls >> dim) || dim < 1) fail(lineno, "dim expects a positive integer");
    } else if (tag == "k") {
      if (dim < 0) fail(lineno, "k must follow dim");
      if (k >= 0) fail(lineno, "duplicate k line");
      if (!(ls >> k)) fail(lineno, "k expects an integer");
      if (k < 1 || k > dim)
        fail(lineno, "invalid adjacency: k=" + std::to_string(k) +
                         " out of range for dim=" + std::to_string(dim));
    } else if (tag == "p") {
      if (dim < 0 || k < 0) fail(lineno, "point before dim/k header");
      Point p(dim);
      for (int c = 0; c < dim; ++c)
        if (!(ls >> p[c])) fail(lineno, "point expects " + std::to_string(dim) + " coordinates");
      Coord extra;
      if (ls >> extra) fail(lineno, "point has more than " + std::to_string(dim) + " coordinates");
      if (std::find(pts.begin(), pts.end(), p) != pts.end()) {
        std::ostringstream os;
        os << "duplicate point (";
        for (int c = 0; c < dim; ++c) os << (c ? " " : "") << p[c];
        os << ")";
        fail(lineno, os.str());
      }
      pts.push_back(std::move(p));
    } else {
      fail(lineno, "unknown directive '" + tag + "'");
    }
    std::string trailing;
    if (ls >> trailing) fail(lineno, "trailing tokens after directive");
  }
  if (dim < 0) throw parse_error("missing dim line");
  if (k < 0) throw parse_error("missing k line");
  if (pts.empty()) throw parse_error("image lists no points");
  return DigitalImage(std::move(pts), AdjacencyKind::from_dim_k(dim, k));
}

std::string serialize_image(const DigitalImage& X) {
  std::ostringstream os;
  os << "dim " << X.kind().dim << "\n";
  os << "k " << X.kind().k << "\n";
  for (const Point& p : X.points()) {
    os << "p";
    for (Coord c : p) os << ' ' << c;
    os << "\n";
  }
  return os.str();
}

DigitalImage load_image_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open image file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_image(buf.str());
  } catch (const parse_error& e) {
    throw parse_error(path + ": " + e.what());
  }
}

void save_image_file(const DigitalImage& X, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write image file: " + path);
  out << serialize_image(X);
}

}  // namespace digitop
