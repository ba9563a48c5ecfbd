"""Flip-flop QRAM toolkit: compile classical datasets into state-writing
circuits, simulate them exactly, budget their noise, and estimate signed
inner products with fork-based swap tests."""

from .circuits import (Circuit, Schedule, cn_not_depth, decompose_cn_not,
                       decompose_cn_roty, lower_to_toffoli, schedule,
                       simulate)
from .errors import (CircuitParseError, DegenerateDatasetError, FFQRAMError,
                     NormalFormError, PostSelectionError, QubitBoundsError,
                     ResourceError, UnsupportedConfigurationError,
                     ValidationError)
from .forking import (ForkSpec, QueryCounter, build_fork_state,
                      conventional_swap_test, pairwise_sum, preset_fragment,
                      qutrit_fork, sample_control, swap_test_imag,
                      swap_test_real)
from .gates import (ClassicalXLayer, CnNot, CnRotArbitrary, CnRotY, CSwap,
                    Gate, H, Phase, RotY, SubspaceH3, Swap, Toffoli, X)
from .kernels import BACKEND as KERNEL_BACKEND
from .noise import (CurveRow, NoiseBudget, count_locations_in_circuit,
                    count_tau, count_tau_single_bit, curve, curve_csv,
                    epsilon_for_target, monte_carlo_no_error_fraction,
                    success_probability, tau_for)
from .qsvm import TrainingSet, prepare_chi, synthesize_chi_circuit, target_chi
from .serialize import parse, parse_json, serialize, serialize_json
from .statevector import (StateVector, apply_classical_x_layer,
                          apply_controlled, apply_single_qubit, fidelity,
                          inner_product, post_select, probability_of,
                          probability_of_bits, tensor)
from .synthesis import (BusSpec, DataRecord, Dataset, SynthesisOptions,
                        angles_from_amplitudes, complex_amplitude_write,
                        postselection_probability, simulate_write,
                        synthesize, synthesize_complex, update_qdb,
                        write_binary, zero_amplitude_addresses)

__version__ = "0.1.0"
