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

// factlink-toyworld: writes a seeded synthetic KG and corpus plus a run
// config sized for it.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli/config.h"
#include "factlink/status.h"
#include "factlink/synthetic.h"

int main(int argc, char **argv) {
  using namespace factlink;
  CLI::App app{"Generate the synthetic toy world"};
  std::filesystem::path out = "toy";
  uint64_t seed = 0;
  app.add_option("-o,--out", out, "output directory");
  app.add_option("--seed", seed, "generator and run seed");
  CLI11_PARSE(app, argc, argv);

  try {
    ToyWorldConfig wc;
    wc.seed = seed;
    const ToyWorld world = GenerateToyWorld(wc);
    std::filesystem::create_directories(out);
    cli::RunConfig run = cli::ToyRunConfig(seed);
    WriteToyWorld(world, out, cli::HeaderFor(run));
    std::ofstream cfg = OpenForWrite(out / "config.json");
    cfg << cli::ConfigToJson(run).dump(2) << '\n';
    std::cerr << "wrote " << world.entries.size() << " entries, "
              << world.facts.size() << " facts, " << world.pairs.size()
              << " pairs, " << world.oies.size() << " OIEs to " << out.string()
              << "\n";
  } catch (const Error &e) {
    std::cerr << "factlink-toyworld: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
