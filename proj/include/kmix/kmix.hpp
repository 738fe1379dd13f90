// Licensed under the Apache License, Version 2.0
#pragma once

#include "kmix/common.hpp"
#include "kmix/compact_index.hpp"
#include "kmix/container.hpp"
#include "kmix/errata.hpp"
#include "kmix/index.hpp"
#include "kmix/long_index.hpp"
#include "kmix/oracles.hpp"
#include "kmix/params.hpp"
#include "kmix/short_index.hpp"
#include "kmix/strings.hpp"
#include "kmix/succinct.hpp"
