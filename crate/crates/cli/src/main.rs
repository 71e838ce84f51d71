use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use tropsvm_core::experiments::{self, ExperimentConfig};
use tropsvm_core::generalization::{self, radon_witness};
use tropsvm_core::plot::{emit_plot, Figure};
use tropsvm_core::svm::{self, HardFit, LabeledDataset};
use tropsvm_core::{io, trop_distance, Error, TorusPoint, TropicalHyperplane};

/// Tropical support vector machines and max-plus geometry experiments.
#[derive(Parser, Debug)]
#[command(name = "tropsvm", version, about)]
struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Output directory for tables, plots and models.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Number of random trials for experiments.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tropical distance between two points, or from a point to H_ω.
    Dist {
        /// Comma-separated coordinates.
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
        /// Treat the second argument as the normal ω of a hyperplane.
        #[arg(long)]
        hyperplane: bool,
    },
    /// Write a two-class Gaussian dataset as CSV.
    Gen {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        per_class: usize,
        #[arg(long, default_value_t = 5.0)]
        separation: f64,
        /// Output file; defaults to `<out>/dataset.csv`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Train a tropical SVM on a CSV dataset and write the model file.
    Train {
        data: PathBuf,
        /// Validation set for the heuristic trainer; defaults to the training set.
        #[arg(long)]
        validation: Option<PathBuf>,
        /// Hard-margin training only; fails if the classes are not separable.
        #[arg(long)]
        hard: bool,
        #[arg(long, default_value_t = svm::DEFAULT_C)]
        c: f64,
        /// Model file; defaults to `<out>/model.txt`.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Predict labels for a CSV dataset and report accuracy.
    Predict { model: PathBuf, data: PathBuf },
    /// Test accuracy of tropical and linear SVMs across dimensions.
    ExpCurse {
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// Test hit rates against the VC lower bound.
    ExpBound {
        #[command(flatten)]
        exp: ExpArgs,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
    },
    /// Growth of tropical and Euclidean distances with the number of stimuli.
    ExpScaling {
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000")]
        ns: Vec<usize>,
    },
    /// Distances of lifted and shifted Gaussian tuning curves.
    ExpTuning {
        #[arg(long, default_value_t = 101)]
        stimuli: usize,
    },
    /// Distances, hyperplanes and classification in function space.
    ExpFunctional,
    /// Radon partition of d+1 points whose tropical hulls intersect.
    Radon {
        /// Points as comma-separated coordinates.
        #[arg(required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// VC generalization bound and the implied hit-rate lower bound.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        /// Training hit rate; prints the lower bound on the test hit rate.
        #[arg(long)]
        hit: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct ExpArgs {
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Training points per class (the validation set has the same size).
    #[arg(long)]
    per_class: Option<usize>,
    #[arg(long, default_value_t = 100)]
    test_per_class: usize,
    /// Half the coordinate offset of the class means.
    #[arg(long)]
    separation: Option<f64>,
    #[arg(long, default_value_t = svm::DEFAULT_C)]
    c: f64,
}

fn parse_point(s: &str) -> Result<TorusPoint> {
    let raw = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("`{t}` is not a number"))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(TorusPoint::normalize(&raw)?)
}

fn read_data(path: &Path) -> Result<LabeledDataset> {
    let f = File::open(path).map_err(Error::from).with_context(|| format!("opening {}", path.display()))?;
    io::read_dataset(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(Error::from)?;
    }
    let f = File::create(path).map_err(Error::from).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn emit(fig: &Figure, out: &Path, stem: &str) -> Result<()> {
    let (svg, csv) = emit_plot(fig, &out.join(stem))?;
    println!("wrote {} and {}", svg.display(), csv.display());
    Ok(())
}

fn config(cli: &Cli, exp: &ExpArgs, default_per_class: usize, default_s: f64) -> ExperimentConfig {
    let base = ExperimentConfig::default();
    ExperimentConfig {
        seed: cli.seed,
        trials: cli.trials,
        dims: exp.dims.clone().unwrap_or(base.dims),
        samples_per_class: exp.per_class.unwrap_or(default_per_class),
        test_per_class: exp.test_per_class,
        separation: exp.separation.unwrap_or(default_s),
        c: exp.c,
        ..base
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Dist { x, y, hyperplane } => {
            let (x, y) = (parse_point(x)?, parse_point(y)?);
            let d = if *hyperplane { TropicalHyperplane::new(y).distance(&x)? } else { trop_distance(&x, &y)? };
            println!("{d}");
        }
        Command::Gen { dim, per_class, separation, output } => {
            let g = experiments::gen_gaussian_dataset(*dim, *per_class, *separation, cli.seed)?;
            let path = output.clone().unwrap_or_else(|| cli.out.join("dataset.csv"));
            let mut w = create(&path)?;
            io::write_dataset(&g.data, &mut w)?;
            w.flush().map_err(Error::from)?;
            println!("wrote {}", path.display());
        }
        Command::Train { data, validation, hard, c, model } => {
            let train = read_data(data)?;
            let fitted = if *hard {
                match svm::train_hard(&train)? {
                    HardFit::Separable(m) => m,
                    HardFit::Inseparable { best_margin } => {
                        return Err(Error::SearchFailed(format!("classes are not separable (best margin {best_margin})")).into())
                    }
                }
            } else {
                let val = match validation {
                    Some(p) => read_data(p)?,
                    None => train.clone(),
                };
                svm::train_heuristic(&train, &val, *c)?
            };
            let path = model.clone().unwrap_or_else(|| cli.out.join("model.txt"));
            let mut w = create(&path)?;
            io::write_model(&fitted, &mut w)?;
            w.flush().map_err(Error::from)?;
            println!("margin {}", fitted.margin());
            println!("training accuracy {}", fitted.accuracy(&train)?);
            println!("wrote {}", path.display());
        }
        Command::Predict { model, data } => {
            let f = File::open(model).map_err(Error::from).with_context(|| format!("opening {}", model.display()))?;
            let model = io::read_model(BufReader::new(f)).with_context(|| format!("reading {}", model.display()))?;
            let data = read_data(data)?;
            for label in data.labels() {
                if model.assignment().coord_of(label).is_none() {
                    return Err(Error::UnknownLabel(label.clone()).into());
                }
            }
            println!("label,predicted");
            for (x, label) in data.iter() {
                println!("{label},{}", model.predict(x)?);
            }
            println!("accuracy {}", model.accuracy(&data)?);
        }
        Command::ExpCurse { exp } => {
            let cfg = config(cli, exp, 5, 5.0);
            let rows = experiments::run_curse_experiment(&cfg)?;
            println!("d,tropical_hit,tropical_sd,classical_hit,classical_sd");
            for r in &rows {
                println!("{},{:.4},{:.4},{:.4},{:.4}", r.d, r.tropical_hit, r.tropical_sd, r.classical_hit, r.classical_sd);
            }
            let title = format!("class mean separation {:.3}", cfg.mean_separation());
            emit(&experiments::curse_figure(&rows, &title), &cli.out, "curse")?;
        }
        Command::ExpBound { exp, eta } => {
            let mut cfg = config(cli, exp, 100, std::f64::consts::SQRT_2);
            cfg.eta = *eta;
            if exp.dims.is_none() {
                let n = 2 * cfg.samples_per_class;
                cfg.dims.retain(|&d| d <= n);
            }
            let rows = experiments::run_bound_experiment(&cfg)?;
            println!("d,hit,hit_sd,train_hit,lower_bound,coverage");
            for r in &rows {
                println!("{},{:.4},{:.4},{:.4},{:.4},{:.3}", r.d, r.hit, r.hit_sd, r.train_hit, r.lower_bound, r.coverage);
            }
            let title = format!("N = {} per class, eta = {}", cfg.samples_per_class, cfg.eta);
            emit(&experiments::bound_figure(&rows, &title), &cli.out, "bound")?;
        }
        Command::ExpScaling { ns } => {
            let rows = experiments::run_scaling_experiment(ns, cli.trials, cli.seed)?;
            println!("n,mean_trop,se_trop,theory_trop,mean_euclid,se_euclid");
            for r in &rows {
                println!("{},{:.4},{:.4},{:.4},{:.4},{:.4}", r.n, r.mean_trop, r.se_trop, r.theory_trop, r.mean_euclid, r.se_euclid);
            }
            emit(&experiments::scaling_figure(&rows), &cli.out, "scaling")?;
        }
        Command::ExpTuning { stimuli } => {
            let (lift, shift) = experiments::run_tuning_experiment(*stimuli)?;
            println!("sweep,param,trop,euclid");
            for (name, rows) in [("lift", &lift), ("shift", &shift)] {
                for r in rows.iter() {
                    println!("{name},{},{:.6},{:.6}", r.param, r.trop, r.euclid);
                }
            }
            emit(&experiments::tuning_figure(&lift, "vertical lift", "lift"), &cli.out, "tuning_lift")?;
            emit(&experiments::tuning_figure(&shift, "horizontal shift", "shift"), &cli.out, "tuning_shift")?;
        }
        Command::ExpFunctional => {
            for (name, value) in experiments::run_functional_experiment()? {
                println!("{name}: {value}");
            }
            emit(&experiments::functions_figure(), &cli.out, "functions")?;
        }
        Command::Radon { points } => {
            let pts = points.iter().map(|s| parse_point(s)).collect::<Result<Vec<_>>>()?;
            let w = radon_witness(&pts)?;
            let show = |idx: &[usize]| idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ");
            println!("part A: {}", show(&w.part_a));
            println!("part B: {}", show(&w.part_b));
            println!("witness: {}", w.witness);
        }
        Command::Bound { n, d, eta, hit } => {
            println!("vc_bound {}", generalization::vc_bound(*n, *d, *eta)?);
            if let Some(h) = hit {
                println!("lower_bound {}", generalization::hit_rate_lower_bound(*h, *n, *d, *eta)?);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let numerical = e.chain().any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_numerical));
            ExitCode::from(if numerical { 3 } else { 2 })
        }
    }
}
