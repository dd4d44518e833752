pub mod arakelian;
pub mod builder;
pub mod cli;
pub mod grid;
pub mod loglift;
pub mod render;
pub mod scene;
pub mod topology;

pub use cli::run_cli;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/grid.md")]
    mod grid {}
    #[doc = include_str!("../../../book/src/topology.md")]
    mod topology {}
    #[doc = include_str!("../../../book/src/exhaustions.md")]
    mod exhaustions {}
    #[doc = include_str!("../../../book/src/builder.md")]
    mod builder {}
    #[doc = include_str!("../../../book/src/loglift.md")]
    mod loglift {}
    #[doc = include_str!("../../../book/src/scenes.md")]
    mod scenes {}
}
