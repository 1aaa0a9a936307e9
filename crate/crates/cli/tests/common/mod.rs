#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn rgl(args: &[&str]) -> Output {
    rgl_env(args, &[])
}

pub fn rgl_env(args: &[&str], env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rgl"));
    cmd.args(args).env_remove("RGL_CACHE_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("run rgl")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}
