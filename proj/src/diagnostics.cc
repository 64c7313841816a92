// Copyright 2026 The DiaQuad Authors
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

#include "diaquad/diagnostics.h"

#include "diaquad/grid.h"
#include "diaquad/loss.h"
#include "diaquad/synth.h"

namespace diaquad {

ModelConfig GradCheckModelConfig(int dim) {
  ModelConfig c;
  c.hidden = c.word_dim = c.encoder_hidden = dim;
  c.pos_dim = c.pos_hidden = c.edge_dim = c.mlp_dim = dim;
  c.gat_heads = 2;
  c.dropout = 0.0;
  return c;
}

Dialogue GradCheckDialogue(uint64_t seed) {
  SynthProfile p;
  p.min_utterances = p.max_utterances = 2;
  p.min_tokens = 4;
  p.max_tokens = 5;
  p.min_quads = p.max_quads = 2;
  p.max_span_length = 2;
  return SynthCorpus(seed, 1, p).dialogues.front();
}

ad::GradCheckReport CheckModelGradients(const TripleGnnModel& model,
                                        const Dialogue& d,
                                        const ad::GradCheckOptions& options) {
  const TagGrids gold = EncodeGold(d, GlobalTokenMap(d));
  auto loss = [&]() {
    return GridLoss(model.Forward(d), gold, model.config().loss_weights);
  };
  return ad::GradCheck(loss, model.params().params(), options);
}

}  // namespace diaquad
