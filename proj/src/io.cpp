#include "steinmm/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <string_view>

#include "steinmm/errors.hpp"

namespace steinmm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Sample read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open dataset file '" + path + "'");
  Sample sample;
  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto comma = row.find(',');
    auto fail = [&] {
      throw ParseError(path + ":" + std::to_string(line_no) + ": cannot parse row '" + std::string(row) + "'");
    };
    if (comma == std::string_view::npos) {
      double v = 0.0;
      if (!parse_double(row, v)) {
        if (first_content) {
          first_content = false;
          continue;  // header
        }
        fail();
      }
      sample.values.push_back(v);
    } else {
      double v = 0.0, count = 0.0;
      if (!parse_double(row.substr(0, comma), v) || !parse_double(row.substr(comma + 1), count)) {
        if (first_content) {
          first_content = false;
          continue;
        }
        fail();
      }
      if (!(count >= 0.0) || count != static_cast<double>(static_cast<long long>(count))) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": count must be a non-negative integer");
      }
      sample.values.insert(sample.values.end(), static_cast<std::size_t>(count), v);
    }
    first_content = false;
  }
  if (sample.values.empty()) throw ParseError("dataset '" + path + "' contains no observations");
  return sample;
}

std::string default_data_dir() {
  if (const char* env = std::getenv("STEINMM_DATA")) return env;
  return STEINMM_DATA_DIR;
}

}  // namespace steinmm
