#include "mteq/tensor_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mteq/error.hpp"

namespace mteq {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("invalid number '" + std::string(tok) + "'", line);
  return v;
}

std::size_t parse_size(std::string_view tok, std::size_t line, const char* what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(std::string("invalid ") + what + " '" + std::string(tok) + "'", line);
  return v;
}

// Reads lines, skipping blank ones, and tracks the 1-based line number.
class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, buf_)) {
      ++line_;
      tokens = split(buf_);
      if (!tokens.empty()) return true;
    }
    return false;
  }
  std::size_t line() const { return line_; }

private:
  std::istream& in_;
  std::string buf_;
  std::size_t line_ = 0;
};

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Tensor read_tensor(std::istream& in) {
  LineReader reader(in);
  std::vector<std::string_view> tok;
  if (!reader.next(tok)) throw ParseError("empty tensor file", 1);
  const std::size_t header_line = reader.line();
  if (tok.size() != 5 || tok[0] != "MT1")
    throw ParseError("header must be 'MT1 <m> <n> <dense|coo> <count>'", header_line);
  const std::size_t m = parse_size(tok[1], header_line, "order");
  const std::size_t n = parse_size(tok[2], header_line, "dimension");
  const std::string storage(tok[3]);
  const std::size_t count = parse_size(tok[4], header_line, "count");
  if (m < 2) throw ParseError("order must be >= 2", header_line);
  if (n < 1) throw ParseError("dimension must be >= 1", header_line);
  const int order = static_cast<int>(m);

  if (storage == "dense") {
    const std::size_t total = dense_size(order, n, dense_entry_cap());
    if (count != total)
      throw ParseError("dense count must be n^m = " + std::to_string(total), header_line);
    std::vector<double> vals;
    vals.reserve(total);
    while (vals.size() < total && reader.next(tok)) {
      if (vals.size() + tok.size() > total)
        throw ParseError("more than " + std::to_string(total) + " values", reader.line());
      for (auto t : tok) vals.push_back(parse_double(t, reader.line()));
    }
    if (vals.size() != total)
      throw ParseError("expected " + std::to_string(total) + " values, found " +
                           std::to_string(vals.size()),
                       reader.line());
    if (reader.next(tok)) throw ParseError("trailing data after dense body", reader.line());
    return Tensor::dense(order, n, std::move(vals));
  }
  if (storage == "coo") {
    std::vector<std::size_t> idx;
    std::vector<double> vals;
    idx.reserve(count * m);
    vals.reserve(count);
    std::size_t prev_line = 0;
    while (reader.next(tok)) {
      if (vals.size() == count) throw ParseError("more entries than declared", reader.line());
      if (tok.size() != m + 1)
        throw ParseError("coo line needs " + std::to_string(m) + " indices and a value",
                         reader.line());
      const std::size_t first = idx.size();
      for (std::size_t q = 0; q < m; ++q) {
        const std::size_t v = parse_size(tok[q], reader.line(), "index");
        if (v < 1 || v > n)
          throw ParseError("index " + std::to_string(v) + " outside [1, " + std::to_string(n) + "]",
                           reader.line());
        idx.push_back(v - 1);
      }
      vals.push_back(parse_double(tok[m], reader.line()));
      if (prev_line && !std::lexicographical_compare(idx.begin() + first - m, idx.begin() + first,
                                                     idx.begin() + first, idx.end()))
        throw ParseError("coo entries must be strictly increasing and unique", reader.line());
      prev_line = reader.line();
    }
    if (vals.size() != count)
      throw ParseError("declared " + std::to_string(count) + " entries, found " +
                           std::to_string(vals.size()),
                       reader.line());
    return Tensor::coo(order, n, std::move(idx), std::move(vals));
  }
  throw ParseError("storage must be 'dense' or 'coo', got '" + storage + "'", header_line);
}

void write_tensor(std::ostream& out, const Tensor& a) {
  const auto m = static_cast<std::size_t>(a.order());
  const bool dense = a.storage() == Tensor::Storage::Dense;
  out << "MT1 " << m << ' ' << a.dim() << ' ' << (dense ? "dense" : "coo") << ' '
      << a.stored_entries() << '\n';
  if (dense) {
    // One line per trailing fiber keeps files readable.
    const auto vals = a.values();
    for (std::size_t k = 0; k < vals.size(); ++k)
      out << format_double(vals[k]) << ((k + 1) % a.dim() == 0 ? '\n' : ' ');
    return;
  }
  a.for_each([&](std::span<const std::size_t> idx, double v) {
    for (auto i : idx) out << (i + 1) << ' ';
    out << format_double(v) << '\n';
  });
}

Vec read_vec(std::istream& in) {
  LineReader reader(in);
  std::vector<std::string_view> tok;
  if (!reader.next(tok)) throw ParseError("empty vector file", 1);
  if (tok.size() != 1) throw ParseError("first line must hold the length only", reader.line());
  const std::size_t n = parse_size(tok[0], reader.line(), "length");
  Vec v;
  v.reserve(n);
  while (v.size() < n && reader.next(tok)) {
    if (v.size() + tok.size() > n) throw ParseError("more values than declared", reader.line());
    for (auto t : tok) v.push_back(parse_double(t, reader.line()));
  }
  if (v.size() != n)
    throw ParseError("expected " + std::to_string(n) + " values, found " + std::to_string(v.size()),
                     reader.line());
  if (reader.next(tok)) throw ParseError("trailing data after vector body", reader.line());
  return v;
}

void write_vec(std::ostream& out, std::span<const double> v) {
  out << v.size() << '\n';
  for (double x : v) out << format_double(x) << '\n';
}

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

template <class Fn>
auto with_path_context(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

}  // namespace

Tensor read_tensor_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return with_path_context(path, [&] { return read_tensor(in); });
}

void write_tensor_file(const std::filesystem::path& path, const Tensor& a) {
  auto out = open_out(path);
  write_tensor(out, a);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

Vec read_vec_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return with_path_context(path, [&] { return read_vec(in); });
}

void write_vec_file(const std::filesystem::path& path, std::span<const double> v) {
  auto out = open_out(path);
  write_vec(out, v);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace mteq
