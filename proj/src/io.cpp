#include "lcc/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lcc/errors.hpp"

namespace lcc {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string> next(const char* expect) {
    std::string line;
    if (!std::getline(in_, line)) throw ParseError(line_no_ + 1, std::string("unexpected end of file, expected ") + expect);
    ++line_no_;
    if (!line.empty() && line.back() == '\r') throw ParseError(line_no_, "CR line endings are not accepted");
    return split(line);
  }

  void expect_end() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!split(line).empty()) throw ParseError(line_no_, "trailing content after the last record");
    }
  }

  [[nodiscard]] std::size_t line() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::uint64_t parse_uint(const std::string& tok, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end) throw ParseError(line, std::string("invalid ") + what + " '" + tok + "'");
  return v;
}

double parse_double(const std::string& tok, std::size_t line, const char* what) {
  double v = 0;
  const auto* end = tok.data() + tok.size();
  auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end) throw ParseError(line, std::string("invalid ") + what + " '" + tok + "'");
  return v;
}

Rational parse_fraction(const std::string& tok, std::size_t line) {
  const auto slash = tok.find('/');
  if (slash == std::string::npos) throw ParseError(line, "rational entry '" + tok + "' must have the form a/b");
  const std::string num = tok.substr(0, slash);
  const std::string den = tok.substr(slash + 1);
  auto digits = [](const std::string& s, bool sign) {
    std::size_t k = (sign && !s.empty() && s[0] == '-') ? 1 : 0;
    if (k == s.size()) return false;
    for (; k < s.size(); ++k)
      if (s[k] < '0' || s[k] > '9') return false;
    return true;
  };
  if (!digits(num, true) || !digits(den, false)) throw ParseError(line, "rational entry '" + tok + "' must have the form a/b");
  boost::multiprecision::cpp_int a(num), b(den);
  if (b == 0) throw ParseError(line, "zero denominator in '" + tok + "'");
  return Rational(a, b);
}

std::string format_entry_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_fraction(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

void write_instance(std::ostream& out, const LccInstance& inst) {
  const auto& v = inst.vectors;
  const auto& f = v.field();
  out << "LCCv1\n";
  out << "field " << f.name() << "\n";
  out << "n " << v.size() << " d " << v.dim() << " q " << inst.query_arity << " delta " << format_double(inst.delta)
      << "\n";
  for (Index i = 0; i < v.size(); ++i) {
    for (Index j = 0; j < v.dim(); ++j) {
      if (j > 0) out << ' ';
      switch (f.kind) {
        case FieldKind::Real:
          out << format_entry_real(v.real_row(i)[j]);
          break;
        case FieldKind::Rational:
          out << format_fraction(v.rational_row(i)[j]);
          break;
        case FieldKind::PrimeField:
          out << v.prime_row(i)[j];
          break;
      }
    }
    out << "\n";
  }
  for (const auto& m : inst.matchings) {
    out << "m " << m.triples.size() << "\n";
    for (const auto& t : m.triples) out << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << "\n";
  }
}

LccInstance read_instance(std::istream& in) {
  LineReader r(in);
  auto tok = r.next("header");
  if (tok.size() != 1 || tok[0] != "LCCv1") throw ParseError(r.line(), "expected 'LCCv1'");
  tok = r.next("field line");
  FieldSpec field;
  if (tok.size() == 2 && tok[0] == "field" && tok[1] == "R") {
    field = FieldSpec::real();
  } else if (tok.size() == 2 && tok[0] == "field" && tok[1] == "Q") {
    field = FieldSpec::rational();
  } else if (tok.size() == 3 && tok[0] == "field" && tok[1] == "Fp") {
    const auto p = parse_uint(tok[2], r.line(), "prime");
    try {
      field = FieldSpec::prime(p);
    } catch (const PreconditionError& e) {
      throw ParseError(r.line(), e.what());
    }
  } else {
    throw ParseError(r.line(), "expected 'field R', 'field Q' or 'field Fp <p>'");
  }
  tok = r.next("size line");
  if (tok.size() != 8 || tok[0] != "n" || tok[2] != "d" || tok[4] != "q" || tok[6] != "delta") {
    throw ParseError(r.line(), "expected 'n <n> d <d> q <q> delta <decimal>'");
  }
  const std::size_t n = parse_uint(tok[1], r.line(), "n");
  const std::size_t d = parse_uint(tok[3], r.line(), "d");
  const auto q = parse_uint(tok[5], r.line(), "q");
  if (q != 3) throw ParseError(r.line(), "only q = 3 is supported");
  const double delta = parse_double(tok[7], r.line(), "delta");
  if (!(delta >= 0.0 && delta <= 1.0)) throw ParseError(r.line(), "delta must lie in [0, 1]");

  std::vector<double> re;
  std::vector<Rational> qe;
  std::vector<std::uint64_t> pe;
  for (Index i = 0; i < n; ++i) {
    tok = r.next("vector line");
    if (tok.size() != d) {
      throw ParseError(r.line(), "expected " + std::to_string(d) + " entries, got " + std::to_string(tok.size()));
    }
    for (const auto& t : tok) {
      switch (field.kind) {
        case FieldKind::Real:
          re.push_back(parse_double(t, r.line(), "real entry"));
          break;
        case FieldKind::Rational:
          qe.push_back(parse_fraction(t, r.line()));
          break;
        case FieldKind::PrimeField: {
          const auto x = parse_uint(t, r.line(), "residue");
          if (x >= field.p) throw ParseError(r.line(), "residue " + t + " is not reduced mod p");
          pe.push_back(x);
          break;
        }
      }
    }
  }
  VectorList vectors;
  switch (field.kind) {
    case FieldKind::Real:
      vectors = VectorList::real(n, d, std::move(re));
      break;
    case FieldKind::Rational:
      vectors = VectorList::rational(n, d, std::move(qe));
      break;
    case FieldKind::PrimeField:
      vectors = VectorList::prime(n, d, field.p, std::move(pe));
      break;
  }
  std::vector<Matching> matchings(n);
  for (Index v = 0; v < n; ++v) {
    tok = r.next("matching header");
    if (tok.size() != 2 || tok[0] != "m") throw ParseError(r.line(), "expected 'm <k>'");
    const auto k = parse_uint(tok[1], r.line(), "matching size");
    matchings[v].owner = v;
    for (std::uint64_t t = 0; t < k; ++t) {
      tok = r.next("triple line");
      if (tok.size() != 3) throw ParseError(r.line(), "expected three indices");
      Triple tr{};
      for (int a = 0; a < 3; ++a) {
        const auto x = parse_uint(tok[a], r.line(), "index");
        if (x < 1 || x > n) throw ParseError(r.line(), "index " + tok[a] + " out of range 1.." + std::to_string(n));
        tr[a] = x - 1;
      }
      matchings[v].triples.push_back(tr);
    }
  }
  r.expect_end();
  return make_instance(std::move(vectors), std::move(matchings), delta);
}

void write_instance_file(const std::string& path, const LccInstance& inst) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot write " + path);
  write_instance(f, inst);
}

LccInstance read_instance_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot open " + path);
  return read_instance(f);
}

void write_family(std::ostream& out, const ClusterFamily& family) {
  for (std::size_t s = 0; s < family.sets.size(); ++s) {
    out << "S " << s + 1 << ":";
    for (Index i : family.sets[s]) out << ' ' << i + 1;
    out << "\n";
  }
  for (const auto& [p, s] : family.pair_assoc) out << "P " << p.first + 1 << ' ' << p.second + 1 << ' ' << s + 1 << "\n";
}

ClusterFamily read_family(std::istream& in) {
  ClusterFamily fam;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto tok = split(line);
    if (tok.empty()) continue;
    if (tok[0] == "S") {
      if (tok.size() < 2 || tok[1].empty() || tok[1].back() != ':') throw ParseError(no, "expected 'S <i>: ...'");
      const auto idx = parse_uint(tok[1].substr(0, tok[1].size() - 1), no, "set number");
      if (idx != fam.sets.size() + 1) throw ParseError(no, "sets must be numbered consecutively from 1");
      std::vector<Index> s;
      for (std::size_t k = 2; k < tok.size(); ++k) {
        const auto x = parse_uint(tok[k], no, "index");
        if (x < 1) throw ParseError(no, "indices are 1-based");
        s.push_back(x - 1);
      }
      fam.sets.push_back(make_index_set(std::move(s)));
    } else if (tok[0] == "P") {
      if (tok.size() != 4) throw ParseError(no, "expected 'P <a> <b> <i>'");
      const auto a = parse_uint(tok[1], no, "index");
      const auto b = parse_uint(tok[2], no, "index");
      const auto s = parse_uint(tok[3], no, "set number");
      if (a < 1 || b < 1 || s < 1 || s > fam.sets.size()) throw ParseError(no, "pair association out of range");
      fam.pair_assoc[{std::min(a, b) - 1, std::max(a, b) - 1}] = s - 1;
    } else {
      throw ParseError(no, "unknown record '" + tok[0] + "'");
    }
  }
  return fam;
}

void write_family_file(const std::string& path, const ClusterFamily& family) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot write " + path);
  write_family(f, family);
}

ClusterFamily read_family_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot open " + path);
  return read_family(f);
}

}  // namespace lcc
