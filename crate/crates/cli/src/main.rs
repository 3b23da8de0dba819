mod args;

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::Parser;
use serde::Serialize;

use args::{Cli, Command, CorpusArgs, EvaluateArgs, GenerateArgs, RunArgs, ServeArgs};
use logloop::corpus::{
    baseline_parse, export_clustering, generate_synthetic, import_clustering, load_corpus, write_logs,
    write_truth_csv,
};
use logloop::hitl::{pipeline, PipelineOptions};
use logloop::metrics::{evaluate, merge_query_params, Evaluation, QueryParams};
use logloop::report::REPORT_VERSION;
use logloop::{Execution, Feedback, GroundTruth, LogStore, RefinementReport, Simulator};

/// Exit status 2 marks bad input, 1 anything that went wrong afterwards.
enum Failure {
    Input(anyhow::Error),
    Runtime(anyhow::Error),
}

type Outcome = Result<(), Failure>;

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn runtime<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Runtime(e.into())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Generate(a) => generate(a),
        Command::Serve(a) => serve(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn corpus(args: &CorpusArgs, seed: u64) -> Result<(LogStore, GroundTruth), Failure> {
    match (&args.generate, &args.logs, &args.truth) {
        (Some(keys), _, _) => {
            let c = generate_synthetic(&keys.config(seed));
            Ok((c.logs, c.truth))
        }
        (None, Some(logs), Some(truth)) => load_corpus(logs, truth).map_err(input),
        (None, Some(_), None) => Err(input(anyhow!("--truth is required to simulate feedback and score results"))),
        (None, None, _) => Err(input(anyhow!("give either --logs with --truth, or --generate"))),
    }
}

fn write_file(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(runtime)
}

fn run(a: RunArgs) -> Outcome {
    let (logs, truth) = corpus(&a.corpus, a.seed)?;
    let base = match &a.import {
        Some(path) => import_clustering(path).map_err(input)?,
        None => baseline_parse(&logs, args::knobs(&a.knobs), a.seed),
    };
    if base.n_logs() != logs.len() {
        return Err(input(anyhow!(
            "base clustering covers {} logs but the corpus has {}",
            base.n_logs(),
            logs.len()
        )));
    }
    let opts = PipelineOptions {
        repeat: a.repeat,
        lossless_completion: a.lossless,
        exec: Execution::default(),
    };
    let mut fb = Feedback::new(Simulator::new(&truth)).with_execution(opts.exec);
    let outcome = pipeline(&base, &logs, &mut fb, &opts).map_err(runtime)?;
    let report = RefinementReport::build(&base, &outcome, &truth, fb.counters(), opts.exec).map_err(runtime)?;

    fs::create_dir_all(&a.out)
        .with_context(|| format!("cannot create {}", a.out.display()))
        .map_err(runtime)?;
    write_file(&a.out.join("report.json"), &(report.to_json() + "\n"))?;
    export_clustering(&outcome.clustering, &a.out.join("clustering.json")).map_err(runtime)?;

    println!("logs       {}", report.n_logs);
    println!("clusters   {} -> {}", report.before.n_clusters, report.after.n_clusters);
    println!("GA         {:.4} -> {:.4}", report.before.ga, report.after.ga);
    println!("MA         {:.4} -> {:.4}", report.before.ma, report.after.ma);
    println!(
        "questions  {} (message-loss {}, select {}, dummy-token {})",
        report.counters.total, report.counters.message_loss, report.counters.select, report.counters.dummy_token
    );
    println!("rounds     {}", report.rounds.len());
    println!("wrote      {}", a.out.display());
    Ok(())
}

#[derive(Serialize)]
struct EvaluationReport {
    version: u32,
    n_logs: usize,
    evaluation: Evaluation,
    /// Bound parameters for a merge that started from this clustering.
    query_params: QueryParams,
    select_bound: usize,
    dummy_bound: usize,
}

fn evaluate_cmd(a: EvaluateArgs) -> Outcome {
    let (logs, truth) = corpus(&a.corpus, a.seed)?;
    let mc = import_clustering(&a.import).map_err(input)?;
    if mc.n_logs() != logs.len() {
        return Err(input(anyhow!(
            "clustering covers {} logs but the corpus has {}",
            mc.n_logs(),
            logs.len()
        )));
    }
    let evaluation = evaluate(&mc, &truth).map_err(input)?;
    let params = merge_query_params(mc.pairs(), &truth);
    let c = &evaluation.census;
    println!("logs       {}", logs.len());
    println!("clusters   {}", evaluation.n_clusters);
    println!("GA         {:.4}", evaluation.ga);
    println!("MA         {:.4}", evaluation.ma);
    println!(
        "census     correct {}, loss-pure {}, complete-partial {}, loss-mixed {}, complete-mixed {}",
        c.correct, c.loss_pure, c.complete_partial, c.loss_mixed, c.complete_mixed
    );
    if let Some(out) = &a.out {
        let report = EvaluationReport {
            version: REPORT_VERSION,
            n_logs: logs.len(),
            select_bound: params.select_bound(),
            dummy_bound: params.dummy_bound(),
            query_params: params,
            evaluation,
        };
        let json = serde_json::to_string_pretty(&report).map_err(runtime)?;
        write_file(out, &(json + "\n"))?;
    }
    Ok(())
}

fn generate(a: GenerateArgs) -> Outcome {
    let cfg = a.generate.config(a.seed);
    let c = generate_synthetic(&cfg);
    fs::create_dir_all(&a.out)
        .with_context(|| format!("cannot create {}", a.out.display()))
        .map_err(runtime)?;
    let create = |name: &str| {
        let path = a.out.join(name);
        fs::File::create(&path)
            .map(BufWriter::new)
            .with_context(|| format!("cannot create {}", path.display()))
            .map_err(runtime)
    };
    let mut logs_out = create("corpus.log")?;
    write_logs(&mut logs_out, &c.logs).map_err(runtime)?;
    logs_out.flush().map_err(runtime)?;
    let mut truth_out = create("truth.csv")?;
    write_truth_csv(&mut truth_out, &c.logs, &c.truth).map_err(runtime)?;
    truth_out.flush().map_err(runtime)?;
    println!(
        "wrote {} logs from {} templates to {}",
        c.logs.len(),
        c.truth.k(),
        a.out.display()
    );
    Ok(())
}

fn serve(a: ServeArgs) -> Outcome {
    let rt = tokio::runtime::Runtime::new().map_err(runtime)?;
    rt.block_on(async {
        let listener = match tokio::net::TcpListener::bind(&a.serve_addr).await {
            Ok(l) => l,
            Err(e) if e.kind() == std::io::ErrorKind::AddrInUse => {
                return Err(input(anyhow!(
                    "address {} is already in use; choose another with --serve-addr or LOGLOOP_SERVE_ADDR",
                    a.serve_addr
                )))
            }
            Err(e) => return Err(input(anyhow!("cannot listen on {}: {e}", a.serve_addr))),
        };
        let addr = listener.local_addr().map_err(runtime)?;
        println!("listening on http://{addr}");
        std::io::stdout().flush().map_err(runtime)?;
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        logloop_service::serve(listener, shutdown).await.map_err(runtime)
    })
}
