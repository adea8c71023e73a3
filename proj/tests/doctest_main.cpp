int placeholder_doctest_main;
