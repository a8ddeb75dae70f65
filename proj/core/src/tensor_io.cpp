#include "thetanorm/tensor_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace thetanorm {

using json = nlohmann::json;

Tensor parse_tensor(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("tensor document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("shape") || !doc.contains("values"))
    throw std::invalid_argument("tensor document needs fields 'shape' and 'values'");
  try {
    auto dims = doc.at("shape").get<std::vector<int>>();
    auto values = doc.at("values").get<std::vector<double>>();
    return Tensor(Shape(std::move(dims)), std::move(values));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed tensor document: ") + e.what());
  }
}

std::string format_tensor(const Tensor& t) {
  json doc;
  doc["shape"] = t.shape().dims();
  doc["values"] = std::vector<double>(t.values().begin(), t.values().end());
  return doc.dump() + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Tensor read_tensor_file(const std::string& path) { return parse_tensor(read_text_file(path)); }

void write_tensor_file(const std::string& path, const Tensor& t) {
  write_text_file(path, format_tensor(t));
}

}  // namespace thetanorm
