#include "pfspec/state_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pfspec {

std::string format_double(double x) {
  char buf[40];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_state_csv(std::ostream& os, const StateVector& u,
                     const std::string& comment) {
  if (!u.grid) throw std::invalid_argument("write_state_csv: state has no grid");
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "kx,ky,kz,weight,lambda,re,im\n";
  os << "0,0,0,0,0," << format_double(u.f0.real()) << ','
     << format_double(u.f0.imag()) << '\n';
  for (int l = 1; l <= 2; ++l)
    for (int m = 0; m < u.n_nodes(); ++m) {
      const Vec3& k = u.grid->nodes[m];
      const Complex c = u.at(m, l);
      os << format_double(k.x) << ',' << format_double(k.y) << ','
         << format_double(k.z) << ',' << format_double(u.grid->weights[m])
         << ',' << l << ',' << format_double(c.real()) << ','
         << format_double(c.imag()) << '\n';
    }
}

void write_state_csv(const std::string& path, const StateVector& u,
                     const std::string& comment) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_state_csv: cannot open " + path);
  write_state_csv(os, u, comment);
}

namespace {

double parse_double(const std::string& s, int line_no) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || ptr != e) {
    std::ostringstream msg;
    msg << "read_state_csv: bad number '" << s << "' on line " << line_no;
    throw std::runtime_error(msg.str());
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

StateVector read_state_csv(std::istream& is) {
  std::string line;
  do {
    if (!std::getline(is, line))
      throw std::runtime_error("read_state_csv: empty input");
  } while (!line.empty() && line[0] == '#');
  if (split_csv(line) !=
      std::vector<std::string>{"kx", "ky", "kz", "weight", "lambda", "re", "im"})
    throw std::runtime_error("read_state_csv: unexpected header: " + line);

  struct Row {
    Vec3 k;
    double w;
    Complex v;
  };
  std::vector<Row> rows1, rows2;
  bool have_f0 = false;
  Complex f0;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv(line);
    if (f.size() != 7) {
      std::ostringstream msg;
      msg << "read_state_csv: expected 7 fields on line " << line_no << ", got "
          << f.size();
      throw std::runtime_error(msg.str());
    }
    const int lambda = static_cast<int>(parse_double(f[4], line_no));
    const Complex val{parse_double(f[5], line_no), parse_double(f[6], line_no)};
    if (lambda == 0) {
      if (have_f0)
        throw std::runtime_error("read_state_csv: duplicate lambda = 0 row");
      have_f0 = true;
      f0 = val;
    } else if (lambda == 1 || lambda == 2) {
      Row r{{parse_double(f[0], line_no), parse_double(f[1], line_no),
             parse_double(f[2], line_no)},
            parse_double(f[3], line_no),
            val};
      (lambda == 1 ? rows1 : rows2).push_back(r);
    } else {
      std::ostringstream msg;
      msg << "read_state_csv: lambda must be 0, 1 or 2 on line " << line_no;
      throw std::runtime_error(msg.str());
    }
  }
  if (!have_f0)
    throw std::runtime_error("read_state_csv: missing lambda = 0 row");
  if (rows1.size() != rows2.size() || rows1.empty())
    throw std::runtime_error(
        "read_state_csv: lambda = 1 and lambda = 2 blocks must list the same "
        "nodes");
  for (std::size_t m = 0; m < rows1.size(); ++m) {
    const Vec3 d = rows1[m].k - rows2[m].k;
    if (d.x != 0.0 || d.y != 0.0 || d.z != 0.0 ||
        rows1[m].w != rows2[m].w)
      throw std::runtime_error(
          "read_state_csv: node mismatch between polarization blocks at row " +
          std::to_string(m));
  }

  auto grid = std::make_shared<QuadratureGrid>();
  grid->nodes.reserve(rows1.size());
  grid->weights.reserve(rows1.size());
  double R = 0.0;
  for (const Row& r : rows1) {
    if (!(r.w > 0.0))
      throw std::runtime_error("read_state_csv: weights must be positive");
    grid->nodes.push_back(r.k);
    grid->weights.push_back(r.w);
    R = std::max(R, r.k.norm());
  }
  grid->R = R;

  StateVector u(grid);
  u.f0 = f0;
  for (std::size_t m = 0; m < rows1.size(); ++m) {
    u.at(static_cast<int>(m), 1) = rows1[m].v;
    u.at(static_cast<int>(m), 2) = rows2[m].v;
  }
  return u;
}

StateVector read_state_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_state_csv: cannot open " + path);
  return read_state_csv(is);
}

}  // namespace pfspec
