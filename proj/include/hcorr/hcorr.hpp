#pragma once

#include "hcorr/rational.hpp"
#include "hcorr/interval.hpp"
#include "hcorr/step_function.hpp"
#include "hcorr/grid.hpp"
#include "hcorr/trig.hpp"
#include "hcorr/walsh.hpp"
#include "hcorr/cyclotomic.hpp"
#include "hcorr/operator_family.hpp"
#include "hcorr/weak_type.hpp"
#include "hcorr/corrector.hpp"
#include "hcorr/io.hpp"
#include "hcorr/run_config.hpp"
