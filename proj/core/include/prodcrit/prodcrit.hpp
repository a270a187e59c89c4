#pragma once

#include "prodcrit/error.hpp"
#include "prodcrit/matcore.hpp"
#include "prodcrit/partitions.hpp"
#include "prodcrit/product.hpp"
#include "prodcrit/states.hpp"
