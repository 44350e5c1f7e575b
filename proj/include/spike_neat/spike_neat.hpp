/*
 Copyright 2026 The spike-neat Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef SPIKE_NEAT_SPIKE_NEAT_HPP
#define SPIKE_NEAT_SPIKE_NEAT_HPP

#include "spike_neat/campaign.hpp"
#include "spike_neat/cartpole.hpp"
#include "spike_neat/config.hpp"
#include "spike_neat/evolution.hpp"
#include "spike_neat/genome.hpp"
#include "spike_neat/neuron.hpp"
#include "spike_neat/phenotype.hpp"
#include "spike_neat/population.hpp"
#include "spike_neat/rng.hpp"
#include "spike_neat/snn.hpp"
#include "spike_neat/stats.hpp"

#endif  // SPIKE_NEAT_SPIKE_NEAT_HPP
