"""Online learning for communication over time-correlated channels.

Library plus CLI covering two tasks at desk scale: adapting a linear decoder
kernel for a Markov fading channel, and selecting a codebook from a
pre-built family for a Markov additive-noise channel, each with the
baselines and channel simulators needed to study them.
"""

from .bandits import (Exp3Bandit, LogBarrierBandit, SolverError, THEORY_MAX_ETA,
                      logbarrier_bregman_step, loss_estimator, random_select)
from .channels import (FadingChannelState, MixingSchedule, MixtureDistribution,
                       NoiseChannelState, fading_step, make_mixture, noise_step,
                       sample_mixture, transmit_additive, transmit_fading,
                       transmit_fading_block)
from .codebooks import (Codebook, SuperCodebook, codebook_from_dict,
                        codebook_to_dict, generate_super_codebook, load_codebook,
                        make_constant_modulus_codebook, max_pairwise_distance,
                        nn_decode, save_codebook, ser_codebook, ser_decoder)
from .config import ConfigError, ExperimentConfig, parse_config
from .decoders import (OptimisticDecoderLearner, SurrogateParams,
                       linearized_subgradient, ls_decoder, surrogate_loss,
                       surrogate_subgradient)
from .harness import (RoundRecord, read_csv, run_codebook_experiment,
                      run_decoder_experiment, run_single_codebook,
                      run_single_decoder, running_average, write_csv)
from .numerics import frobenius_norm, project_frobenius_ball, q_function, seeded_rng

__version__ = "0.1.0"
