// Copyright 2026 The sgpsro Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sgpsro/service/http_api.h"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "httplib.h"
#include "spdlog/spdlog.h"

namespace sgpsro {
namespace {

constexpr char kJson[] = "application/json";

void Reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

// Runs `fn` and turns exceptions into error responses.
void Guard(httplib::Response& res, const std::function<nlohmann::json()>& fn) {
  try {
    Reply(res, 200, fn());
  } catch (const Error& e) {
    Reply(res, HttpStatusFor(e.code()), ErrorBody(e));
  } catch (const std::exception& e) {
    spdlog::error("request failed: {}", e.what());
    Reply(res, 500, ErrorBody(Error(ErrorCode::kInternal, e.what())));
  }
}

nlohmann::json ParseBody(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorCode::kInvalidArgument, "request body is not JSON: ", e.what());
  }
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
    case ErrorCode::kFailedPrecondition:
      return 409;
    case ErrorCode::kResourceExhausted:
      return 429;
    default:
      return 500;
  }
}

nlohmann::json ErrorBody(const Error& error) {
  return {{"error",
           {{"code", ErrorCodeName(error.code())}, {"message", error.what()}}}};
}

void RegisterRoutes(httplib::Server& server, SessionManager& sessions) {
  server.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
    Reply(res, 200, {{"status", "ok"}});
  });
  server.Get("/v1/agents",
             [&sessions](const httplib::Request&, httplib::Response& res) {
               Guard(res, [&] {
                 nlohmann::json out = nlohmann::json::array();
                 for (const auto& a : sessions.Agents())
                   out.push_back(a.ToJson());
                 return out;
               });
             });
  server.Post("/v1/sessions", [&sessions](const httplib::Request& req,
                                          httplib::Response& res) {
    Guard(res, [&] {
      const auto body = ParseBody(req);
      if (!body.is_object() || !body.contains("agent_id") ||
          !body["agent_id"].is_string()) {
        Fail(ErrorCode::kInvalidArgument, "agent_id (string) is required");
      }
      std::optional<std::uint64_t> seed;
      if (body.contains("seed") && !body["seed"].is_null()) {
        if (!body["seed"].is_number_unsigned()) {
          Fail(ErrorCode::kInvalidArgument,
               "seed must be a non-negative integer");
        }
        seed = body["seed"].get<std::uint64_t>();
      }
      for (const auto& [key, value] : body.items()) {
        if (key != "agent_id" && key != "seed") {
          Fail(ErrorCode::kInvalidArgument, "unknown field '", key, "'");
        }
      }
      return sessions.Create(body["agent_id"], seed);
    });
  });
  server.Get(R"(/v1/sessions/([0-9a-f]+))",
             [&sessions](const httplib::Request& req, httplib::Response& res) {
               Guard(res, [&] { return sessions.Get(req.matches[1]); });
             });
  server.Post(R"(/v1/sessions/([0-9a-f]+)/action)",
              [&sessions](const httplib::Request& req, httplib::Response& res) {
                Guard(res, [&] {
                  return sessions.Act(req.matches[1], ParseBody(req));
                });
              });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(
          nlohmann::json{{"error",
                          {{"code", res.status == 404 ? "not_found" : "error"},
                           {"message", "no such route"}}}}
              .dump(),
          kJson);
    }
  });
}

}  // namespace sgpsro
