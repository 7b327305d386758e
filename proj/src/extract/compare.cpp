namespace fint {}
