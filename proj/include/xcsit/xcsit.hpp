#pragma once

// Umbrella header for the alternating-CSIT X-channel laboratory.

#include "xcsit/channel.hpp"
#include "xcsit/classifier.hpp"
#include "xcsit/csit.hpp"
#include "xcsit/decoder.hpp"
#include "xcsit/dof.hpp"
#include "xcsit/errors.hpp"
#include "xcsit/harness.hpp"
#include "xcsit/json_io.hpp"
#include "xcsit/linalg.hpp"
#include "xcsit/rational.hpp"
#include "xcsit/report.hpp"
#include "xcsit/scheme.hpp"
