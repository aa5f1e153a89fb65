"""Link-level simulator for handover management assisted by a reflecting
panel operating in its radiative near field."""

from .cascade_stats import (CascadeStats, HopGainStats, SnrModel,
                            cascade_moments, gain_pdf, sample_snr_exact,
                            snr_cdf, snr_pdf)
from .errors import (ConfigError, DegenerateDistributionError, DomainError,
                     InvalidArgumentError, NumericalFailureError,
                     RisHoSimError, SingularFocusError)
from .field_model import (BeamMap, BeamStats, CarrierConfig, FocusConfig,
                          HeatmapGrid, Region, RisPanel, SourceGeometry,
                          array_fraunhofer_distance, beam_heatmap,
                          classify_region, compound_channel_element,
                          configure_focus_phases, focusing_gain_closed,
                          focusing_gain_integral, fraunhofer_distance,
                          fresnel_integrals, incident_field,
                          reflected_field_at_ue)
from .ho_engine import (HoDecision, HoMode, HoThresholds, LinkKind,
                        LinkMeasurement, ServingState, decide_handover,
                        hho_probability, ris_cb_probability,
                        ris_pp_probability, select_target, sho_probability)
from .link_metrics import (McMetrics, MetricResult, OutageThreshold,
                           average_ber, ber_kernel, ergodic_capacity,
                           mc_metrics, outage_probability)
from .scenario_sim import (PppConfig, RsrpTrace, ScenarioLayout,
                           SweepScenario, Trajectory, TriggerResult,
                           build_layout, build_trajectory, deploy_ppp,
                           free_space_gain_db, ho_probability_sweep,
                           ho_trigger_distance, hop_stats_from_geometry,
                           ris_efficiency, ris_ue_distance_histogram,
                           rsrp_along_trajectory, trigger_distance_sweep)

__version__ = "0.1.0"
