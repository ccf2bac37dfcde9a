//! Event text streams, PGM frames and the frame index.

mod index;
mod pgm;
mod text;

pub use index::{
    frame_file_name, read_frame_index, write_frame_index, write_index_header, write_index_row,
    FrameIndexEntry, INDEX_HEADER,
};
pub use pgm::{decode_pgm, encode_pgm, read_pgm, write_pgm};
pub use text::{parse_event_line, read_all, read_stream, write_event, write_events, EventReader};
