pub mod actions;
pub mod closedform;
pub mod numkern;
pub mod oneill;
pub mod thorpe;
pub mod eliminator;
pub mod cli;
