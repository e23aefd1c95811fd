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

#ifndef SGPSRO_SERVICE_HTTP_API_H_
#define SGPSRO_SERVICE_HTTP_API_H_

#include "json.hpp"
#include "sgpsro/core/error.h"
#include "sgpsro/service/session.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace sgpsro {

// HTTP status for an error code.
int HttpStatusFor(ErrorCode code);
// {"error": {"code", "message"}}.
nlohmann::json ErrorBody(const Error& error);

// Routes:
//   GET  /v1/agents
//   POST /v1/sessions              {agent_id, seed?}
//   GET  /v1/sessions/{id}
//   POST /v1/sessions/{id}/action  {type, split?}
//   GET  /v1/health
void RegisterRoutes(httplib::Server& server, SessionManager& sessions);

}  // namespace sgpsro

#endif  // SGPSRO_SERVICE_HTTP_API_H_
