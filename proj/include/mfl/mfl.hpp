#pragma once

#include "mfl/commands.hpp"
#include "mfl/error.hpp"
#include "mfl/experiment.hpp"
#include "mfl/generator.hpp"
#include "mfl/io.hpp"
#include "mfl/model.hpp"
#include "mfl/neighborhoods.hpp"
#include "mfl/rng.hpp"
#include "mfl/stats.hpp"
#include "mfl/vnd.hpp"
