#pragma once

#include <filesystem>
#include <iosfwd>

#include "mteq/tensor.hpp"

namespace mteq {

// .mt layout:
//   MT1 <m> <n> <dense|coo> <count>
//   dense: n^m values, first index slowest
//   coo:   one "<i1> ... <im> <value>" line per entry, 1-based indices
// .vec layout:
//   <n>
//   n values
// Writers emit 17 significant digits so doubles round-trip exactly.

Tensor read_tensor(std::istream& in);
void write_tensor(std::ostream& out, const Tensor& a);
Tensor read_tensor_file(const std::filesystem::path& path);
void write_tensor_file(const std::filesystem::path& path, const Tensor& a);

Vec read_vec(std::istream& in);
void write_vec(std::ostream& out, std::span<const double> v);
Vec read_vec_file(const std::filesystem::path& path);
void write_vec_file(const std::filesystem::path& path, std::span<const double> v);

/// "%.17g".
std::string format_double(double v);

}  // namespace mteq
