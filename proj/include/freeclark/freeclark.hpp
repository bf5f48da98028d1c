#pragma once

// Umbrella header for the library.
#include "freeclark/json_io.hpp"
#include "freeclark/random.hpp"
