int placeholder_test_banova;
