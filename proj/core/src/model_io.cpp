#include "qbdshift/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qbdshift/errors.hpp"

namespace qbd {

namespace {

using nlohmann::json;

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

Position position_of(std::string_view text, std::size_t offset) {
  Position p;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

[[noreturn]] void fail_at(std::string_view source, std::string_view text, std::size_t offset,
                          const std::string& message) {
  const Position p = position_of(text, offset);
  std::ostringstream os;
  os << source << ":" << p.line << ":" << p.column << ": " << message;
  throw ParseError(os.str());
}

// Semantic errors carry the location of the offending key.
[[noreturn]] void fail_key(std::string_view source, std::string_view text, const std::string& key,
                           const std::string& message) {
  const std::string quoted = "\"" + key + "\"";
  const std::size_t at = text.find(quoted);
  fail_at(source, text, at == std::string_view::npos ? 0 : at, message);
}

Matrix read_block(const json& doc, const std::string& key, Eigen::Index n, std::string_view source,
                  std::string_view text) {
  if (!doc.contains(key)) fail_at(source, text, 0, "missing field \"" + key + "\"");
  const json& arr = doc.at(key);
  if (!arr.is_array()) fail_key(source, text, key, "\"" + key + "\" must be an array");
  const std::size_t expected = static_cast<std::size_t>(n * n);
  if (arr.size() != expected) {
    fail_key(source, text, key,
             "\"" + key + "\" has " + std::to_string(arr.size()) + " entries, expected n^2 = " +
                 std::to_string(expected));
  }
  Matrix m(n, n);
  for (std::size_t k = 0; k < expected; ++k) {
    const json& x = arr[k];
    if (!x.is_number()) {
      fail_key(source, text, key, "\"" + key + "\"[" + std::to_string(k) + "] is not a number");
    }
    const double v = x.get<double>();
    if (!std::isfinite(v)) {
      fail_key(source, text, key, "\"" + key + "\"[" + std::to_string(k) + "] is not finite");
    }
    m(static_cast<Eigen::Index>(k) / n, static_cast<Eigen::Index>(k) % n) = v;
  }
  return m;
}

json block_json(const Matrix& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
  }
  return arr;
}

}  // namespace

ModelFile parse_model(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    std::string what = e.what();
    const std::size_t colon = what.find(": ");
    fail_at(source, text, offset, "invalid JSON (" + (colon == std::string::npos ? what : what.substr(colon + 2)) + ")");
  }
  if (!doc.is_object()) fail_at(source, text, 0, "top level must be a JSON object");
  static const std::set<std::string> allowed = {"n", "a_minus", "a_zero", "a_plus", "meta"};
  for (const auto& item : doc.items()) {
    if (!allowed.count(item.key())) fail_key(source, text, item.key(), "unknown field \"" + item.key() + "\"");
  }
  if (!doc.contains("n")) fail_at(source, text, 0, "missing field \"n\"");
  const json& jn = doc.at("n");
  if (!jn.is_number_integer() || jn.get<long long>() < 1) {
    fail_key(source, text, "n", "\"n\" must be a positive integer");
  }
  ModelFile model;
  model.n = static_cast<Eigen::Index>(jn.get<long long>());
  model.a_minus = read_block(doc, "a_minus", model.n, source, text);
  model.a_zero = read_block(doc, "a_zero", model.n, source, text);
  model.a_plus = read_block(doc, "a_plus", model.n, source, text);
  if (doc.contains("meta")) {
    const json& meta = doc.at("meta");
    if (!meta.is_object()) fail_key(source, text, "meta", "\"meta\" must be an object");
    model.meta_json = meta.dump();
    if (meta.contains("name") && meta.at("name").is_string()) model.name = meta.at("name").get<std::string>();
    if (meta.contains("seed") && meta.at("seed").is_number_unsigned()) {
      model.seed = meta.at("seed").get<std::uint64_t>();
    }
  }
  return model;
}

ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str(), path);
}

std::string write_model(const ModelFile& model) {
  json doc;
  doc["n"] = model.n;
  doc["a_minus"] = block_json(model.a_minus);
  doc["a_zero"] = block_json(model.a_zero);
  doc["a_plus"] = block_json(model.a_plus);
  if (!model.meta_json.empty()) {
    doc["meta"] = json::parse(model.meta_json);
  } else if (model.name || model.seed) {
    json meta = json::object();
    if (model.name) meta["name"] = *model.name;
    if (model.seed) meta["seed"] = *model.seed;
    doc["meta"] = meta;
  }
  return doc.dump(2) + "\n";
}

}  // namespace qbd
