// Copyright 2026 The Factlink Authors.
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

// Subcommand bodies. Each reads its inputs from the run config, writes its
// artifacts under paths.output_dir and logs one line per step to `log`.

#ifndef FACTLINK_TOOLS_COMMANDS_H_
#define FACTLINK_TOOLS_COMMANDS_H_

#include <memory>
#include <ostream>
#include <string>
#include <string_view>

#include "cli/config.h"
#include "factlink/ookg.h"

namespace factlink::cli {

void CmdBuildBenchmark(const RunConfig &config, std::ostream &log);
void CmdSplit(const RunConfig &config, std::ostream &log);
void CmdTrainPreranker(const RunConfig &config, std::ostream &log);
void CmdTrainReranker(const RunConfig &config, std::ostream &log);
void CmdTrainOokg(const RunConfig &config, std::ostream &log);
void CmdIndex(const RunConfig &config, std::ostream &log);
void CmdLink(const RunConfig &config, std::ostream &log);
// Report text goes to `out`; progress to `log`.
void CmdEvaluate(const RunConfig &config, std::ostream &out, std::ostream &log);
void CmdDetect(const RunConfig &config, std::ostream &out, std::ostream &log);

// Dispatches "preranker", "reranker" or "ookg"; anything else is
// InvalidArgument.
void CmdTrain(const RunConfig &config, std::string_view stage,
              std::ostream &log);

// confidence, entropy, qkv, coin, constant (always in-KG) or oracle.
std::unique_ptr<Detector> MakeDetector(const RunConfig &config,
                                       std::string_view name);

}  // namespace factlink::cli

#endif  // FACTLINK_TOOLS_COMMANDS_H_
