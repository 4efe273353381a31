namespace ro2 { namespace descent { } }
