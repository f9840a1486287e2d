#pragma once

#include "nic/circuit.hpp"
#include "nic/distance.hpp"
#include "nic/error.hpp"
#include "nic/gateset.hpp"
#include "nic/generate.hpp"
#include "nic/hamiltonian.hpp"
#include "nic/json_io.hpp"
#include "nic/lemmalab.hpp"
#include "nic/linalg.hpp"
#include "nic/random.hpp"
#include "nic/reduction.hpp"
