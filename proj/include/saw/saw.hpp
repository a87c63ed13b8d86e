#pragma once

#include "dct.hpp"
#include "digest.hpp"
#include "error.hpp"
#include "image.hpp"
#include "jpeg.hpp"
#include "manifest.hpp"
#include "metrics.hpp"
#include "pgm.hpp"
#include "phantom.hpp"
#include "quant.hpp"
#include "simulate.hpp"
#include "sweep.hpp"
#include "watermark.hpp"
