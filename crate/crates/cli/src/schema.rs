//! Machine-readable description of every subcommand's flags, generated from
//! the clap definitions so it cannot drift from what the parser accepts.

use clap::{Arg, ArgAction, CommandFactory};
use serde_json::Value;

use crate::args::{Cli, BIGINT, FLOAT, INT};

fn kind(arg: &Arg) -> &'static str {
    if matches!(arg.get_action(), ArgAction::SetTrue | ArgAction::SetFalse) {
        return "flag";
    }
    if !arg.get_possible_values().is_empty() {
        return "enum";
    }
    match arg
        .get_value_names()
        .and_then(|names| names.first())
        .map(|n| n.as_str())
    {
        Some(INT) => "integer",
        Some(FLOAT) => "float",
        Some(BIGINT) => "bigint",
        _ => "string",
    }
}

fn arg_schema(arg: &Arg) -> Value {
    let mut fields = serde_json::Map::new();
    fields.insert("name".into(), Value::String(arg.get_id().to_string()));
    fields.insert(
        "flag".into(),
        Value::String(format!("--{}", arg.get_long().unwrap_or_default())),
    );
    fields.insert("kind".into(), Value::String(kind(arg).into()));
    fields.insert("required".into(), Value::Bool(arg.is_required_set()));
    let defaults: Vec<Value> = arg
        .get_default_values()
        .iter()
        .map(|v| Value::String(v.to_string_lossy().into_owned()))
        .collect();
    if !defaults.is_empty() && kind(arg) != "flag" {
        fields.insert("default".into(), defaults[0].clone());
    }
    let choices: Vec<Value> = arg
        .get_possible_values()
        .iter()
        .filter(|_| kind(arg) == "enum")
        .map(|v| Value::String(v.get_name().to_string()))
        .collect();
    if !choices.is_empty() {
        fields.insert("choices".into(), Value::Array(choices));
    }
    if let Some(help) = arg.get_help() {
        fields.insert("help".into(), Value::String(help.to_string()));
    }
    Value::Object(fields)
}

fn user_args(cmd: &clap::Command) -> Vec<Value> {
    cmd.get_arguments()
        .filter(|a| !matches!(a.get_id().as_str(), "help" | "version"))
        .filter(|a| !a.is_global_set())
        .map(arg_schema)
        .collect()
}

fn global_args() -> Vec<Value> {
    Cli::command()
        .get_arguments()
        .filter(|a| a.is_global_set())
        .map(arg_schema)
        .collect()
}

fn subcommand_schema(cmd: &clap::Command) -> Value {
    let mut fields = serde_json::Map::new();
    fields.insert("subcommand".into(), Value::String(cmd.get_name().into()));
    if let Some(about) = cmd.get_about() {
        fields.insert("about".into(), Value::String(about.to_string()));
    }
    fields.insert("args".into(), Value::Array(user_args(cmd)));
    Value::Object(fields)
}

/// Schema of one subcommand, or `None` if `name` is not a subcommand.
pub fn describe(name: &str) -> Option<Value> {
    let root = Cli::command();
    let sub = root.find_subcommand(name)?;
    let mut schema = subcommand_schema(sub);
    schema
        .as_object_mut()
        .expect("object")
        .insert("global".into(), Value::Array(global_args()));
    Some(schema)
}

/// Schema of every subcommand plus the global flags.
pub fn describe_all() -> Value {
    let root = Cli::command();
    let subs = root
        .get_subcommands()
        .filter(|s| s.get_name() != "help")
        .map(subcommand_schema)
        .collect();
    let mut fields = serde_json::Map::new();
    fields.insert("program".into(), Value::String(root.get_name().into()));
    fields.insert("global".into(), Value::Array(global_args()));
    fields.insert("subcommands".into(), Value::Array(subs));
    fields.insert(
        "exit_codes".into(),
        serde_json::json!({"0": "success", "1": "i/o", "2": "usage", "3": "domain", "4": "capacity"}),
    );
    Value::Object(fields)
}
