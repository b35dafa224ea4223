/*
 * Copyright 2026 The kgstega Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "kgstega/cli.hpp"

namespace {

using kgstega::cli::RunConfig;

void graph_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--nodes", cfg.nodes_path, "nodes TSV (id, label, level)")->required();
  cmd->add_option("--edges", cfg.edges_path, "edges TSV (src, relation, dst, weight)")->required();
  cmd->add_option("--pin", cfg.pins, "pinned node as LEVEL:LABEL (repeatable)");
}

void key_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--key-file", cfg.key_path, "file holding the shared secret")->required();
  cmd->add_option("--corpus", cfg.corpus_path, "review corpus, one sentence per line");
  cmd->add_flag("--reweight", cfg.reweight, "re-estimate edge weights from --corpus");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgstega: knowledge-graph path steganography"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* embed = app.add_subcommand("embed", "hide a payload file in carrier sentences");
  graph_options(embed, cfg);
  key_options(embed, cfg);
  embed->add_option("--templates", cfg.templates_path, "templates TSV (id, pattern)");
  embed->add_option("--in", cfg.in_path, "payload file")->required();
  embed->add_option("--out", cfg.out_path, "sentence file; paths go to <out>.paths.json")
      ->required();
  embed->add_option("--generator", cfg.generator,
                    "external generator command (path JSON on stdin, sentences on stdout)");
  embed->add_option("--max-attempts", cfg.max_attempts, "generator attempts per path");

  auto* extract = app.add_subcommand("extract", "recover a payload from carrier sentences");
  graph_options(extract, cfg);
  key_options(extract, cfg);
  extract->add_option("--in", cfg.in_path, "sentence file")->required();
  extract->add_option("--out", cfg.out_path, "payload file")->required();

  auto* roundtrip = app.add_subcommand("roundtrip", "exhaustive and random round-trip trials");
  graph_options(roundtrip, cfg);
  key_options(roundtrip, cfg);
  roundtrip->add_option("--templates", cfg.templates_path, "templates TSV")->required();
  roundtrip->add_option("--trials", cfg.trials, "random payloads per pin configuration");
  roundtrip->add_option("--max-bits", cfg.max_bits, "longest random payload in bits");
  roundtrip->add_option("--seed", cfg.seed, "seed for random payloads");

  auto* eval = app.add_subcommand("eval", "rate and quality metrics per pin configuration");
  graph_options(eval, cfg);
  key_options(eval, cfg);
  eval->add_option("--templates", cfg.templates_path, "templates TSV")->required();
  eval->add_option("--in", cfg.in_path, "payload file")->required();
  eval->add_option("--out", cfg.out_path, "JSON lines output (default stdout)");
  eval->add_flag("--ppl", cfg.require_perplexity, "require perplexity (needs --corpus)");

  auto* recover = app.add_subcommand("recover", "sentences to path-interchange JSON lines");
  graph_options(recover, cfg);
  recover->add_option("--in", cfg.in_path, "sentence file (default stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR InvalidArgument: " << e.what() << "\n";
    return kgstega::cli::kExitInputError;
  }

  if (*embed) {
    if (cfg.templates_path.empty() && !cfg.generator) {
      std::cerr << "ERROR InvalidArgument: embed needs --templates or --generator\n";
      return kgstega::cli::kExitInputError;
    }
    return kgstega::cli::run_embed(cfg);
  }
  if (*extract) return kgstega::cli::run_extract(cfg);
  if (*roundtrip) return kgstega::cli::run_roundtrip(cfg);
  if (*eval) return kgstega::cli::run_eval(cfg);
  if (cfg.in_path.empty() || cfg.in_path == "-") return kgstega::cli::run_recover(cfg, std::cin, std::cout);
  std::ifstream in(cfg.in_path);
  if (!in) {
    std::cerr << "ERROR IoError: cannot open " << cfg.in_path << "\n";
    return kgstega::cli::kExitInputError;
  }
  return kgstega::cli::run_recover(cfg, in, std::cout);
}
