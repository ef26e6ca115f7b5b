#pragma once
// Convenience umbrella: the full solver and certification toolkit.

#include "zk/config.hpp"
#include "zk/diagnostics.hpp"
#include "zk/domain.hpp"
#include "zk/field.hpp"
#include "zk/forcing.hpp"
#include "zk/functionals.hpp"
#include "zk/manufactured.hpp"
#include "zk/operators.hpp"
#include "zk/params.hpp"
#include "zk/snapshot_io.hpp"
#include "zk/timestepper.hpp"
#include "zk/transforms.hpp"
#include "zk/verifier.hpp"
