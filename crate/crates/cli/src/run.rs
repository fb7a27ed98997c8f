//! Pipeline orchestration: analyze one document, batch over a directory,
//! and the verdict-to-exit-code mapping.

use crate::doc::{
    parse_input, wire_vector, BlockDoc, CayleyStructureDoc, DefectDoc, DocError, HypothesesDoc,
    InputDocument, ReportDocument, VertexCheckDoc, WitnessDoc,
};
use std::path::{Path, PathBuf};
use std::time::Instant;
use toric_defect::defect::{discriminant_verdict, lattice_defect, Verdict};
use toric_defect::hessian::{AgreementVerdict, OracleConfig};
use toric_defect::polytope::{convex_hull, PointConfiguration};

/// Flags shared by `analyze` and `batch`; command-line values override the
/// per-document options.
#[derive(Clone, Debug, Default)]
pub struct AnalyzeFlags {
    pub hull_points: bool,
    pub no_oracle: bool,
    pub trials: Option<u32>,
    pub seed: Option<u64>,
    pub max_dim: usize,
    pub timings: bool,
}

impl AnalyzeFlags {
    pub fn with_max_dim(max_dim: usize) -> Self {
        AnalyzeFlags {
            max_dim,
            ..Default::default()
        }
    }
}

/// Runs the full pipeline on one parsed document.
pub fn analyze_document(
    input: &InputDocument,
    flags: &AnalyzeFlags,
) -> Result<ReportDocument, DocError> {
    if input.dim > flags.max_dim {
        return Err(DocError::Invalid(format!(
            "dim {} exceeds the configured maximum {}",
            input.dim, flags.max_dim
        )));
    }
    let started = Instant::now();
    let mut config = input.configuration()?;

    // exact lattice-point enumeration is what the pipeline is built on;
    // refuse configurations whose hull box is beyond desk scale instead of
    // scanning it for hours
    const BOX_LIMIT: u64 = 1_000_000;
    let probe = convex_hull(&config);
    if probe.bounding_box_cardinality() > toric_defect::lattice::Int::from(BOX_LIMIT) {
        return Err(DocError::Invalid(format!(
            "hull bounding box exceeds {} lattice points; coordinates are too large for exact enumeration",
            BOX_LIMIT
        )));
    }

    if flags.hull_points || input.options.use_hull_points {
        let hull = convex_hull(&config);
        config = PointConfiguration::new(config.dim(), hull.lattice_points())
            .map_err(|e| DocError::Invalid(e.to_string()))?;
    }

    let oracle_cfg = if flags.no_oracle {
        None
    } else {
        Some(OracleConfig {
            trials: flags.trials.unwrap_or(input.options.oracle_trials).max(1),
            seed: flags.seed.unwrap_or(input.options.seed),
        })
    };

    let report = discriminant_verdict(&config, oracle_cfg.as_ref());

    let hypotheses = HypothesesDoc {
        simple: report.simple,
        semigroup_checks: report
            .embedding
            .as_ref()
            .map(|e| {
                e.per_vertex
                    .iter()
                    .map(|c| VertexCheckDoc {
                        vertex: wire_vector(&c.vertex),
                        generated: c.generated,
                        missing: c.missing.as_ref().map(wire_vector),
                    })
                    .collect()
            })
            .unwrap_or_default(),
        all_ok: report.hypotheses_ok,
    };

    let elementary_keys: Vec<Vec<Vec<toric_defect::lattice::Int>>> = report
        .dual_defect
        .as_ref()
        .map(|d| {
            d.report
                .elementary
                .iter()
                .map(|e| e.structure.kernel().canonical_key())
                .collect()
        })
        .unwrap_or_default();

    let cayley_structures: Vec<CayleyStructureDoc> = report
        .structures
        .iter()
        .map(|s| {
            let image_defect = if s.image().is_simplex() {
                lattice_defect(s.image()).ok().map(|w| w.defect)
            } else {
                None
            };
            CayleyStructureDoc {
                projection: s
                    .projection()
                    .matrix()
                    .row_vectors()
                    .iter()
                    .map(wire_vector)
                    .collect(),
                image_dim: s.image().dim(),
                image_vertices: s.image().vertices().iter().map(wire_vector).collect(),
                image_is_simplex: s.image().is_simplex(),
                image_defect,
                blocks: s
                    .blocks()
                    .iter()
                    .map(|b| BlockDoc {
                        image_vertex: wire_vector(&b.image_vertex),
                        points: b.points.iter().map(wire_vector).collect(),
                    })
                    .collect(),
                kernel_rank: s.kernel().rank(),
                elementary: elementary_keys.contains(&s.kernel().canonical_key()),
            }
        })
        .collect();

    let defect = DefectDoc {
        combinatorial: report.dual_defect.as_ref().map(|d| d.value),
        oracle: report.oracle.as_ref().map(|o| o.defect_estimate),
        oracle_max_rank: report.oracle.as_ref().map(|o| o.max_rank_seen),
        agreement: report.agreement.as_ref().map(|a| match a {
            AgreementVerdict::Certified { .. } => "certified".to_string(),
            AgreementVerdict::OracleExceeds { .. } => "oracle-exceeds".to_string(),
            AgreementVerdict::OracleBelowCombinatorial { .. } => "oracle-below".to_string(),
        }),
    };

    let witnesses = WitnessDoc {
        fiber_factors: report
            .dual_defect
            .as_ref()
            .map(|d| d.report.fiber_factors.clone()),
        base_dim: report.dual_defect.as_ref().map(|d| d.report.base_dim),
        two_faces: report.two_face_witness.clone(),
    };

    Ok(ReportDocument {
        input: input.clone(),
        reembedded_from_dim: report.reembedded_from,
        analyzed_dim: report.analyzed.dim(),
        analyzed_points: report.analyzed.len(),
        hypotheses,
        cayley_structures,
        defect,
        verdict: verdict_name(report.verdict).to_string(),
        witnesses,
        inconsistency: report.inconsistency.clone(),
        timing_ms: flags
            .timings
            .then(|| started.elapsed().as_millis() as u64),
    })
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Trivial => "trivial",
        Verdict::Nontrivial => "nontrivial",
        Verdict::HypothesesUnmet => "hypotheses-unmet",
    }
}

/// Exit codes are a function of the verdict alone; errors map to 3.
pub fn exit_code_for(verdict: &str) -> i32 {
    match verdict {
        "trivial" => 0,
        "nontrivial" => 1,
        "hypotheses-unmet" => 2,
        _ => 3,
    }
}

/// One row of a batch run.
#[derive(Clone, Debug)]
pub struct BatchRow {
    pub file: PathBuf,
    pub outcome: Result<ReportDocument, String>,
}

/// Analyzes every `.json` file in a directory, in filename order, with
/// per-file isolation. Files are processed concurrently when the parallel
/// feature is on; output order is deterministic regardless.
pub fn batch(dir: &Path, flags: &AnalyzeFlags, jobs: Option<usize>) -> std::io::Result<Vec<BatchRow>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();

    let work = |path: &PathBuf| -> BatchRow {
        let outcome = std::fs::read(path)
            .map_err(|e| e.to_string())
            .and_then(|bytes| parse_input(&bytes).map_err(|e| e.to_string()))
            .and_then(|doc| analyze_document(&doc, flags).map_err(|e| e.to_string()));
        BatchRow {
            file: path.clone(),
            outcome,
        }
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.unwrap_or(0))
            .build()
            .expect("worker pool");
        Ok(pool.install(|| files.par_iter().map(work).collect()))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        Ok(files.iter().map(work).collect())
    }
}
