#include "core/formats.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dlab {

namespace {

struct Parsed {
  AlgebraPtr alg;
  int m = 0;
  int r = 0;
  bool pairs = false;
  std::vector<i64> flat;
};

int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    fail(Errc::ParseError, "bad value for " + key + ": '" + v + "'");
  }
  return out;
}

Parsed parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("#dlab v1", 0) != 0) {
    fail(Errc::ParseError, "missing '#dlab v1' header");
  }
  std::string base, p = "-", poly;
  int d = -1, m = -1, r = 0;
  bool pairs = false;
  std::istringstream hs(line.substr(8));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) fail(Errc::ParseError, "bad header token '" + tok + "'");
    const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "config") break;
    if (key == "base") {
      base = val;
    } else if (key == "p") {
      p = val;
    } else if (key == "d") {
      d = parse_int(key, val);
    } else if (key == "m") {
      m = parse_int(key, val);
    } else if (key == "Rexp") {
      r = parse_int(key, val);
    } else if (key == "kind") {
      pairs = val == "pairs";
    } else if (key == "poly") {
      poly = val;
    }
  }
  if (d < 1 || m < 0) fail(Errc::ParseError, "header needs d and m");
  Parsed out;
  out.m = m;
  out.r = r;
  out.pairs = pairs;
  if (base == "R") {
    const AlgebraKind kind = d == 1 ? AlgebraKind::R : d == 2 ? AlgebraKind::C : AlgebraKind::H;
    out.alg = share(Algebra::make(kind, 2, d, m));
  } else if (base == "Qp") {
    if (p == "-") fail(Errc::ParseError, "Qp header needs p");
    std::vector<i64> coeffs;
    std::istringstream ps(poly);
    std::string c;
    while (std::getline(ps, c, ',')) coeffs.push_back(parse_int("poly", c));
    out.alg = share(Algebra::make(d == 1 ? AlgebraKind::Qp : AlgebraKind::QpExt,
                                  parse_int("p", p), d, m, coeffs));
  } else {
    fail(Errc::ParseError, "header base must be R or Qp");
  }
  const int width = pairs ? 2 * d : d;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string v;
    int count = 0;
    while (ls >> v) {
      i64 x = 0;
      auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
      if (ec != std::errc{} || ptr != v.data() + v.size()) {
        fail(Errc::ParseError, "line " + std::to_string(lineno) + ": bad integer '" + v + "'");
      }
      out.flat.push_back(x);
      ++count;
    }
    if (count != width) {
      fail(Errc::ParseError, "line " + std::to_string(lineno) + ": expected " +
                                 std::to_string(width) + " integers");
    }
  }
  return out;
}

std::string body(const PointSet& a) {
  std::string s;
  s.reserve(a.flat().size() * 6);
  char buf[24];
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto pt = a.point(i);
    for (std::size_t k = 0; k < pt.size(); ++k) {
      if (k) s += ' ';
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, pt[k]);
      s.append(buf, ptr);
    }
    s += '\n';
  }
  return s;
}

}  // namespace

std::string header_line(const PointSet& a, bool pairs, const SetHeader& extra) {
  const Algebra& alg = a.algebra();
  const bool real = alg.base() == Base::Real;
  std::string h = "#dlab v1 base=" + std::string(real ? "R" : "Qp") +
                  " p=" + (real ? std::string("-") : std::to_string(alg.prime())) +
                  " d=" + std::to_string(alg.dim()) + " m=" + std::to_string(a.scale_exp()) +
                  " Rexp=" + std::to_string(a.radius_exp());
  if (pairs) h += " kind=pairs";
  if (alg.kind() == AlgebraKind::QpExt) {
    h += " poly=";
    for (std::size_t i = 0; i < alg.defining_poly().size(); ++i) {
      if (i) h += ',';
      h += std::to_string(alg.defining_poly()[i]);
    }
  }
  if (!extra.tool.empty()) h += " tool=" + extra.tool;
  if (!extra.config.empty()) h += " config=" + extra.config;
  return h + "\n";
}

std::string to_text(const DSet& a, const SetHeader& extra) {
  return header_line(a, false, extra) + body(a);
}

std::string to_text(const PairSet& g, const SetHeader& extra) {
  return header_line(g, true, extra) + body(g);
}

DSet dset_from_text(const std::string& text) {
  Parsed p = parse(text);
  if (p.pairs) fail(Errc::ParseError, "expected a point set, found pairs");
  return DSet(p.alg, p.m, p.r, std::move(p.flat));
}

PairSet pairs_from_text(const std::string& text) {
  Parsed p = parse(text);
  if (!p.pairs) {
    fail(Errc::ParseError, "expected a pair set (kind=pairs)");
  }
  return PairSet(p.alg, p.m, p.r, std::move(p.flat));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

DSet read_dset(const std::string& path) { return dset_from_text(read_file(path)); }

PairSet read_pairs(const std::string& path) { return pairs_from_text(read_file(path)); }

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoError, "cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      fail(Errc::IoError, "write failed for " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    fail(Errc::IoError, "cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

}  // namespace dlab
