/** Payload shapes for the motion engine's HTTP interface. */

export interface ModelInfo {
  name: string;
  n_q: number;
  n_v: number;
  joint_names: string[];
  frame_names: string[];
  total_mass: number;
  gravity: number[];
  document: unknown;
  content_hash: string;
}

export interface LibraryEntry {
  style: string;
  label: string;
  q0: number[];
  S: number[][];
  sigma: number[];
  mean_coeffs: number[];
  var_frac: number[];
  total_variance: number;
  duration_s: number;
  segment_ref: [number, number] | null;
  coeff_series: number[][];
}

export interface LibraryDoc {
  name: string;
  model: string;
  created?: string;
  entries: LibraryEntry[];
}

export interface LibraryResponse {
  id: string;
  library: LibraryDoc;
  content_hash: string;
}

export interface TrajectoryDoc {
  model: string;
  rate_hz: number;
  style: string;
  source: string;
  n_frames: number;
  duration_s: number;
  times: number[];
  positions: number[][];
  velocities: number[][];
}

/** Stick-figure data: world points per frame plus index pairs to join. */
export interface SkeletonDoc {
  names: string[];
  edges: [number, number][];
  positions: number[][][];
}

export interface MetricsReport {
  label: string;
  mean_dP: number;
  mean_dKE_J: number;
  mean_power_W: number;
  power_W_per_kg: number;
  foot_slide_ratio: number;
  rate_hz: number;
}

export interface SynthesisResult {
  trajectory: TrajectoryDoc;
  skeleton: SkeletonDoc;
  metrics?: MetricsReport;
  content_hash: string;
}

export type CoeffSchedule =
  | { mode: "stored" }
  | { mode: "const"; values: number[] };

export interface SynthesizeBody {
  library: string;
  label: string;
  coeffs: CoeffSchedule;
  duration_s: number;
  rate_hz: number;
}

export interface TransitionSpec {
  kind: "linear-blend";
  window_s: number;
}

export interface SequenceStepBody {
  library: string;
  label: string;
  coeffs: CoeffSchedule;
  duration_s: number;
  transition?: TransitionSpec;
}

export interface SequenceBody {
  rate_hz: number;
  steps: SequenceStepBody[];
}

export interface MetricsBody {
  items: { trajectory_id: string; label: string }[];
  baseline_label?: string;
  eval_rate_hz?: number;
}

export interface MetricsResponse {
  reports: MetricsReport[];
  csv: string;
  compare_csv?: string;
  content_hash: string;
}

export interface TrajectoryUploadBody {
  model: string;
  rate_hz: number;
  positions: number[][];
  velocities?: number[][];
}

export interface TrajectoryStored {
  id: string;
  trajectory: TrajectoryDoc;
  content_hash: string;
}
