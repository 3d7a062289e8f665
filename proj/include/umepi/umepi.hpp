#pragma once

#include "umepi/error.hpp"
#include "umepi/model.hpp"
#include "umepi/occurrence.hpp"
#include "umepi/utility.hpp"
#include "umepi/codec.hpp"
#include "umepi/miner.hpp"
#include "umepi/oracle.hpp"
#include "umepi/datagen.hpp"
