#pragma once

#include "uqr/bases.hpp"
#include "uqr/cartan.hpp"
#include "uqr/error.hpp"
#include "uqr/io.hpp"
#include "uqr/linalg.hpp"
#include "uqr/module.hpp"
#include "uqr/qscalar.hpp"
#include "uqr/report.hpp"
#include "uqr/rmatrix.hpp"
#include "uqr/sysmorph.hpp"
