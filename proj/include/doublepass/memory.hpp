#pragma once

#include "doublepass/envelope.hpp"
#include "doublepass/gaussian.hpp"

namespace doublepass {

// Closed-form memory maps. All are lossless (Y = 0) and symplectic; the rows
// quoted from the protocol relations are completed by the unique passive
// rows that make the full map symplectic.

// Write-in over {atoms, L+}:
//   atoms' = e^{-k2/2} atoms + sqrt(1-e^{-k2}) L+
//   L+'    = -sqrt(1-e^{-k2}) atoms + e^{-k2/2} L+
LinearIOMap write_in_map(double kappa2);

// Read-out over {atoms, readout L+, readout L-}:
//   L-'    = -sqrt(1-e^{-k2}) atoms + e^{-k2/2} L+
//   atoms' = e^{-k2/2} atoms + sqrt(1-e^{-k2}) L+   (atom evolution during
//                                                    the read pulse)
//   L+'    = L-                                     (completion slot)
LinearIOMap read_out_map(double kappa2);

// Write-in followed by read-out over
// {input L+, atoms, readout L+, readout L-}; the retrieved signal sits in
// the readout L- output with coefficient -(1-e^{-k2}).
LinearIOMap complete_transfer_map(double kappa2);

}  // namespace doublepass
