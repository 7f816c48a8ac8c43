use std::path::PathBuf;

use anyhow::{bail, Context as _};

use pap_core::anno::json::{parse_dataset, write_predictions};
use pap_core::baselines::{fit_mode_table, predict_constant, predict_mode};

use crate::Context;

#[derive(clap::Args)]
pub struct Args {
    /// Training annotations (states are learned from these)
    #[arg(long, value_name = "PATH")]
    pub train: PathBuf,

    /// Test annotations (boxes and actions are copied, states predicted)
    #[arg(long, value_name = "PATH")]
    pub test: PathBuf,

    /// Output prediction file
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,

    /// `modal` or `constant:<state-name>` (default modal)
    #[arg(long, default_value = "modal")]
    pub mode: String,
}

pub fn run(_ctx: &Context, args: Args) -> anyhow::Result<()> {
    let (train_vocab, train_videos) = parse_dataset(&args.train)?;
    let (test_vocab, test_videos) = parse_dataset(&args.test)?;
    if train_vocab != test_vocab {
        bail!("train and test vocabularies differ; states would not be comparable");
    }

    let preds = match args.mode.as_str() {
        "modal" => {
            let table = fit_mode_table(&train_vocab, &train_videos)?;
            predict_mode(&table, &test_videos)?
        }
        other => match other.strip_prefix("constant:") {
            Some(name) => {
                let state = test_vocab
                    .state_id(name)
                    .with_context(|| format!("state {name:?} not in vocabulary"))?;
                predict_constant(state, &test_videos)?
            }
            None => bail!("--mode must be `modal` or `constant:<state-name>`, got {other:?}"),
        },
    };
    write_predictions(&args.out, &preds, &test_vocab)?;
    eprintln!(
        "predicted {} videos into {}",
        preds.videos().len(),
        args.out.display()
    );
    Ok(())
}
