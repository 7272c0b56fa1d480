#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "crosshair/error.hpp"
#include "crosshair/grid.hpp"
#include "crosshair/router.hpp"
#include "crosshair/zoo.hpp"

// Newline-delimited JSON messages of the cross-hair protocol. One message
// per line; field order is fixed; unknown fields are rejected. See
// docs/protocol.md for byte-level examples.
namespace crosshair::wire {

struct RegisterModel {
  ModelProfile model;
  friend bool operator==(const RegisterModel&, const RegisterModel&) = default;
};

struct StartServing {
  friend bool operator==(const StartServing&, const StartServing&) = default;
};

struct InferRequest {
  std::uint64_t request_id = 0;
  std::optional<double> acc_min;
  double lat_max_ms = 0.0;
  std::uint64_t input_id = 0;
  friend bool operator==(const InferRequest&, const InferRequest&) = default;
};

// Carries the label only. Which model answered, its latency and any noise
// stay on the server.
struct InferResponse {
  std::uint64_t request_id = 0;
  int label = 0;
  friend bool operator==(const InferResponse&, const InferResponse&) = default;
};

inline constexpr std::string_view kInfeasibleSet = "infeasible_set";

struct InferError {
  std::uint64_t request_id = 0;
  std::string code{kInfeasibleSet};
  friend bool operator==(const InferError&, const InferError&) = default;
};

struct TelemetryRequest {
  friend bool operator==(const TelemetryRequest&, const TelemetryRequest&) = default;
};

struct TelemetryResponse {
  TelemetrySummary summary;
  friend bool operator==(const TelemetryResponse&, const TelemetryResponse&) = default;
};

// Acknowledges a control message (register_model, start_serving).
struct Ack {
  std::string of;
  friend bool operator==(const Ack&, const Ack&) = default;
};

// Protocol-level failure. Codes: malformed, out_of_range, invalid_model,
// registration_closed, not_serving, telemetry_disabled.
struct ErrorReply {
  std::string code;
  std::string message;
  friend bool operator==(const ErrorReply&, const ErrorReply&) = default;
};

using Message = std::variant<RegisterModel, StartServing, InferRequest, InferResponse, InferError, TelemetryRequest,
                             TelemetryResponse, Ack, ErrorReply>;

namespace detail {

using Json = nlohmann::ordered_json;

inline double snap(double v, std::optional<double> step) {
  if (!step || !std::isfinite(v)) return v;
  return grid::snap_nearest(v, *step);
}

inline void expect_fields(const Json& j, std::initializer_list<std::string_view> required,
                          std::initializer_list<std::string_view> optional = {}) {
  for (const auto key : required) {
    if (!j.contains(std::string(key))) throw MalformedMessage("missing field '" + std::string(key) + "'");
  }
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const auto k : required) known = known || key == k;
    for (const auto k : optional) known = known || key == k;
    if (!known) throw MalformedMessage("unknown field '" + key + "'");
  }
}

template <class T>
T field(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw MalformedMessage(std::string("field '") + key + "' must be a string");
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) throw MalformedMessage(std::string("field '") + key + "' must be a number");
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_unsigned()) throw MalformedMessage(std::string("field '") + key + "' must be a non-negative integer");
  } else {
    if (!v.is_number_integer()) throw MalformedMessage(std::string("field '") + key + "' must be an integer");
  }
  return v.get<T>();
}

}  // namespace detail

// Serializes one message as a single JSON line. When a granularity is given,
// accuracy and latency values are snapped to its grid.
inline std::string encode(const Message& msg, const std::optional<GranularityConfig>& g = std::nullopt) {
  using detail::Json;
  const std::optional<double> acc_step = g ? std::optional<double>(g->acc_g) : std::nullopt;
  const std::optional<double> lat_step = g ? std::optional<double>(g->lat_g) : std::nullopt;
  Json j = std::visit(
      [&](const auto& m) -> Json {
        using T = std::decay_t<decltype(m)>;
        Json o;
        if constexpr (std::is_same_v<T, RegisterModel>) {
          o["type"] = "register_model";
          o["id"] = m.model.id;
          o["name"] = m.model.name;
          o["accuracy"] = detail::snap(m.model.accuracy, acc_step);
          o["latency_ms"] = detail::snap(m.model.latency_ms, lat_step);
          o["num_classes"] = m.model.num_classes;
        } else if constexpr (std::is_same_v<T, StartServing>) {
          o["type"] = "start_serving";
        } else if constexpr (std::is_same_v<T, InferRequest>) {
          o["type"] = "infer";
          o["request_id"] = m.request_id;
          if (m.acc_min) o["acc_min"] = detail::snap(*m.acc_min, acc_step);
          o["lat_max_ms"] = detail::snap(m.lat_max_ms, lat_step);
          o["input_id"] = m.input_id;
        } else if constexpr (std::is_same_v<T, InferResponse>) {
          o["type"] = "infer_response";
          o["request_id"] = m.request_id;
          o["label"] = m.label;
        } else if constexpr (std::is_same_v<T, InferError>) {
          o["type"] = "infer_error";
          o["request_id"] = m.request_id;
          o["code"] = m.code;
        } else if constexpr (std::is_same_v<T, TelemetryRequest>) {
          o["type"] = "telemetry";
        } else if constexpr (std::is_same_v<T, TelemetryResponse>) {
          o["type"] = "telemetry_response";
          o["received"] = m.summary.received;
          o["served"] = m.summary.served;
          o["satisfied"] = m.summary.satisfied;
          o["failed"] = m.summary.failed;
          o["triggers"] = Json::object();
          for (const auto& [id, n] : m.summary.triggers) o["triggers"][id] = n;
        } else if constexpr (std::is_same_v<T, Ack>) {
          o["type"] = "ack";
          o["of"] = m.of;
        } else if constexpr (std::is_same_v<T, ErrorReply>) {
          o["type"] = "error";
          o["code"] = m.code;
          o["message"] = m.message;
        }
        return o;
      },
      msg);
  return j.dump() + "\n";
}

// Parses exactly one newline-terminated line.
inline Message decode(std::string_view line) {
  using detail::field;
  using detail::Json;
  if (line.empty() || line.back() != '\n') throw MalformedMessage("message is not newline-terminated");
  line.remove_suffix(1);
  if (line.find('\n') != std::string_view::npos) throw MalformedMessage("more than one line");
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error&) {
    throw MalformedMessage("message is not valid JSON");
  }
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw MalformedMessage("message must be an object with a string 'type'");
  }
  const auto type = j.at("type").get<std::string>();
  try {
    if (type == "register_model") {
      detail::expect_fields(j, {"type", "id", "name", "accuracy", "latency_ms", "num_classes"});
      RegisterModel m;
      m.model.id = field<std::string>(j, "id");
      m.model.name = field<std::string>(j, "name");
      m.model.accuracy = field<double>(j, "accuracy");
      m.model.latency_ms = field<double>(j, "latency_ms");
      m.model.num_classes = field<int>(j, "num_classes");
      return m;
    }
    if (type == "start_serving") {
      detail::expect_fields(j, {"type"});
      return StartServing{};
    }
    if (type == "infer") {
      detail::expect_fields(j, {"type", "request_id", "lat_max_ms", "input_id"}, {"acc_min"});
      InferRequest m;
      m.request_id = field<std::uint64_t>(j, "request_id");
      if (j.contains("acc_min")) m.acc_min = field<double>(j, "acc_min");
      m.lat_max_ms = field<double>(j, "lat_max_ms");
      m.input_id = field<std::uint64_t>(j, "input_id");
      if (m.acc_min && !(*m.acc_min >= 0.0 && *m.acc_min <= 1.0)) throw OutOfRange("acc_min must lie in [0, 1]");
      if (!(m.lat_max_ms > 0.0) || !std::isfinite(m.lat_max_ms)) throw OutOfRange("lat_max_ms must be positive");
      return m;
    }
    if (type == "infer_response") {
      detail::expect_fields(j, {"type", "request_id", "label"});
      return InferResponse{field<std::uint64_t>(j, "request_id"), field<int>(j, "label")};
    }
    if (type == "infer_error") {
      detail::expect_fields(j, {"type", "request_id", "code"});
      return InferError{field<std::uint64_t>(j, "request_id"), field<std::string>(j, "code")};
    }
    if (type == "telemetry") {
      detail::expect_fields(j, {"type"});
      return TelemetryRequest{};
    }
    if (type == "telemetry_response") {
      detail::expect_fields(j, {"type", "received", "served", "satisfied", "failed", "triggers"});
      TelemetryResponse m;
      m.summary.received = field<std::uint64_t>(j, "received");
      m.summary.served = field<std::uint64_t>(j, "served");
      m.summary.satisfied = field<std::uint64_t>(j, "satisfied");
      m.summary.failed = field<std::uint64_t>(j, "failed");
      const auto& t = j.at("triggers");
      if (!t.is_object()) throw MalformedMessage("'triggers' must be an object");
      for (const auto& [id, n] : t.items()) {
        if (!n.is_number_unsigned()) throw MalformedMessage("trigger counts must be non-negative integers");
        m.summary.triggers[id] = n.get<std::uint64_t>();
      }
      return m;
    }
    if (type == "ack") {
      detail::expect_fields(j, {"type", "of"});
      return Ack{field<std::string>(j, "of")};
    }
    if (type == "error") {
      detail::expect_fields(j, {"type", "code", "message"});
      return ErrorReply{field<std::string>(j, "code"), field<std::string>(j, "message")};
    }
  } catch (const Json::exception&) {
    throw MalformedMessage("field has an unrepresentable value");
  }
  throw MalformedMessage("unknown message type '" + type + "'");
}

}  // namespace crosshair::wire
