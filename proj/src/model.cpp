/* Copyright 2026 The nphmc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "nphmc/model.hpp"

namespace nphmc {

namespace {

template <class S, class Prog>
RunOutcome run_program(RunContext<S>& ctx, const Prog& prog) {
  RunOutcome out;
  try {
    std::vector<S> value = prog(ctx);
    out.status = RunStatus::kSuccess;
    out.log_weight = value_of(ctx.log_weight());
    out.value.reserve(value.size());
    for (const S& v : value) out.value.push_back(value_of(v));
  } catch (const detail::AbortRun&) {
    out.status = ctx.status();
    out.log_weight = detail::kNegInf;
  }
  out.consumed = ctx.cursor();
  out.kinds = std::move(ctx.kinds());
  return out;
}

}  // namespace

RunOutcome Model::replay(const Trace& q) const {
  RunContext<double> ctx(RunContext<double>::Mode::kReplay, q, nullptr, 0, nullptr);
  return run_program(ctx, plain_);
}

std::pair<RunOutcome, Trace> Model::run_extending(const Trace& q, const Extender& extender,
                                                  std::size_t extend_cap) const {
  RunContext<double> ctx(RunContext<double>::Mode::kExtending, q, &extender, extend_cap,
                         nullptr);
  RunOutcome out = run_program(ctx, plain_);
  return {std::move(out), ctx.trace()};
}

TapedRun Model::replay_taped(const Trace& q) const {
  TapedRun run;
  run.tape.reserve(1024);
  RunContext<Var> ctx(RunContext<Var>::Mode::kReplay, q, nullptr, 0, &run.tape);
  run.outcome = run_program(ctx, taped_);
  run.coord_nodes = std::move(ctx.coord_nodes());
  run.weight_node = ctx.log_weight().id;
  return run;
}

double log_density(const Model& m, const Trace& q) {
  RunOutcome out = m.replay(q);
  if (out.ok() && out.consumed == q.size()) return out.log_weight;
  return detail::kNegInf;
}

}  // namespace nphmc
