#pragma once

#include "thetanorm/tensor.hpp"

#include <string>

namespace thetanorm {

/// Tensor documents are JSON objects with exactly two required fields:
///   {"shape": [n1, ..., nd], "values": [v0, v1, ...]}
/// Values are listed row-major (last coordinate fastest).
Tensor parse_tensor(const std::string& text);
std::string format_tensor(const Tensor& t);

Tensor read_tensor_file(const std::string& path);
void write_tensor_file(const std::string& path, const Tensor& t);

/// Whole file contents; throws std::runtime_error if unreadable.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace thetanorm
