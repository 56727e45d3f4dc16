#ifndef NONORD_REPORT_HPP
#define NONORD_REPORT_HPP

#include <chrono>
#include <string>
#include <utility>

#include "json.hpp"

namespace nonord {

using json = nlohmann::json;

/// Outcome of one verification. A failed report always carries a witness.
struct Report {
  std::string check;
  json params = json::object();
  bool pass = false;
  json witness = json::object();
  double runtime_ms = 0.0;

  json to_json() const {
    return json{{"check", check}, {"params", params}, {"pass", pass}, {"witness", witness}, {"runtime_ms", runtime_ms}};
  }

  static Report from_json(const json& j) {
    Report r;
    r.check = j.at("check").get<std::string>();
    r.params = j.at("params");
    r.pass = j.at("pass").get<bool>();
    r.witness = j.at("witness");
    r.runtime_ms = j.at("runtime_ms").get<double>();
    return r;
  }
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace nonord

#endif  // NONORD_REPORT_HPP
