#pragma once

#include "packing3d/rational.hpp"
#include "packing3d/error.hpp"
#include "packing3d/geometry.hpp"
#include "packing3d/io.hpp"
#include "packing3d/generators.hpp"
#include "packing3d/harmonic.hpp"
#include "packing3d/nfdh.hpp"
#include "packing3d/steinberg.hpp"
#include "packing3d/licheng.hpp"
#include "packing3d/strip_transform.hpp"
#include "packing3d/volume_pack.hpp"
#include "packing3d/bins.hpp"
#include "packing3d/oracle.hpp"
#include "packing3d/lp.hpp"
#include "packing3d/gap.hpp"
#include "packing3d/absolute_bp.hpp"
#include "packing3d/rotation.hpp"
#include "packing3d/asymptotic_bp.hpp"
#include "packing3d/mvbb.hpp"
